#include "carnot/serialize.hpp"

#include <utility>

#include "json.hpp"

#include "carnot/error.hpp"

namespace carnot {
namespace {

using nlohmann::json;

json rational_json(const Rational& value) { return json(to_string(value)); }

Rational rational_from(const json& value, const char* what) {
  if (!value.is_string()) {
    throw Error(ErrorCode::MalformedInput,
                std::string(what) + " must be a rational encoded as a string");
  }
  return parse_rational(value.get<std::string>());
}

const json& field(const json& object, const char* name) {
  auto it = object.find(name);
  if (it == object.end()) {
    throw Error(ErrorCode::MalformedInput, std::string("missing field '") + name + "'");
  }
  return *it;
}

json vector_json(const LieVector& v) {
  json coords = json::object();
  for (const auto& [index, value] : v.coords()) {
    coords[std::to_string(index + 1)] = rational_json(value);
  }
  return coords;
}

LieVector vector_from(const json& coords, const AlgebraHandle& algebra, const char* what) {
  if (!coords.is_object()) {
    throw Error(ErrorCode::MalformedInput,
                std::string(what) + " must be an object of 1-based index to rational");
  }
  LieVector v = zero_vector(algebra);
  for (const auto& [key, value] : coords.items()) {
    int index = 0;
    try {
      index = std::stoi(key);
    } catch (const std::exception&) {
      throw Error(ErrorCode::MalformedInput,
                  std::string(what) + " has a non-numeric basis index '" + key + "'");
    }
    if (index < 1 || index > algebra->dim()) {
      throw Error(ErrorCode::MalformedInput, std::string(what) + " has basis index " +
                                                 std::to_string(index) + " outside 1.." +
                                                 std::to_string(algebra->dim()));
    }
    v.set_coord(index - 1, rational_from(value, what));
  }
  return v;
}

json bound_json(const CertifiedBound& bound) {
  json object = json::object();
  object["value"] = rational_json(bound.value);
  object["tolerance"] = rational_json(bound.tolerance);
  object["exact"] = bound.exact;
  return object;
}

CertifiedBound bound_from(const json& object, const char* what) {
  if (!object.is_object()) {
    throw Error(ErrorCode::MalformedInput, std::string(what) + " must be an object");
  }
  CertifiedBound bound;
  bound.value = rational_from(field(object, "value"), what);
  bound.tolerance = rational_from(field(object, "tolerance"), what);
  const json& exact = field(object, "exact");
  if (!exact.is_boolean()) {
    throw Error(ErrorCode::MalformedInput, std::string(what) + ".exact must be a boolean");
  }
  bound.exact = exact.get<bool>();
  return bound;
}

json algebra_json(const AlgebraHandle& algebra) {
  AlgebraDescription description = describe(*algebra);
  json object = json::object();
  object["layers"] = description.layer_dims;
  json brackets = json::array();
  for (const BracketEntry& entry : description.brackets) {
    json coords = json::object();
    for (const auto& [k, c] : entry.coords) {
      coords[std::to_string(k + 1)] = rational_json(c);
    }
    brackets.push_back(json{{"i", entry.i + 1}, {"j", entry.j + 1}, {"coords", coords}});
  }
  object["brackets"] = brackets;
  object["labels"] = description.basis_labels;
  object["digest"] = algebra->digest();
  return object;
}

AlgebraHandle algebra_from(const json& object) {
  if (!object.is_object()) {
    throw Error(ErrorCode::MalformedInput, "algebra description must be an object");
  }
  AlgebraDescription description;
  const json& layers = field(object, "layers");
  if (!layers.is_array() || layers.empty()) {
    throw Error(ErrorCode::MalformedInput, "algebra layers must be a nonempty array");
  }
  for (const json& dim : layers) {
    if (!dim.is_number_integer()) {
      throw Error(ErrorCode::MalformedInput, "layer dimensions must be integers");
    }
    description.layer_dims.push_back(dim.get<int>());
  }
  for (const json& entry : field(object, "brackets")) {
    BracketEntry bracket_entry;
    const json& i = field(entry, "i");
    const json& j = field(entry, "j");
    if (!i.is_number_integer() || !j.is_number_integer()) {
      throw Error(ErrorCode::MalformedInput, "bracket indices must be integers");
    }
    bracket_entry.i = i.get<int>() - 1;
    bracket_entry.j = j.get<int>() - 1;
    for (const auto& [key, value] : field(entry, "coords").items()) {
      int k = 0;
      try {
        k = std::stoi(key);
      } catch (const std::exception&) {
        throw Error(ErrorCode::MalformedInput,
                    "bracket coordinate has a non-numeric basis index '" + key + "'");
      }
      bracket_entry.coords[k - 1] = rational_from(value, "bracket coordinate");
    }
    description.brackets.push_back(std::move(bracket_entry));
  }
  if (object.contains("labels")) {
    for (const json& label : object["labels"]) {
      if (!label.is_string()) {
        throw Error(ErrorCode::MalformedInput, "basis labels must be strings");
      }
      description.basis_labels.push_back(label.get<std::string>());
    }
  }
  AlgebraHandle algebra = load_stratified(description);
  if (object.contains("digest")) {
    const json& digest = object["digest"];
    if (!digest.is_string() || digest.get<std::string>() != algebra->digest()) {
      throw Error(ErrorCode::MalformedInput,
                  "algebra digest does not match its structure constants");
    }
  }
  return algebra;
}

json path_json(const HorizontalPath& path) {
  json object = json::object();
  object["algebra"] = path.algebra()->digest();
  json segments = json::array();
  for (const Segment& segment : path.segments()) {
    segments.push_back(
        json{{"direction", vector_json(segment.direction)}, {"duration", rational_json(segment.duration)}});
  }
  object["segments"] = segments;
  return object;
}

HorizontalPath path_from(const json& object, const AlgebraHandle& algebra) {
  if (!object.is_object()) {
    throw Error(ErrorCode::MalformedInput, "path must be an object");
  }
  const json& digest = field(object, "algebra");
  if (!digest.is_string() || digest.get<std::string>() != algebra->digest()) {
    throw Error(ErrorCode::MalformedInput, "path was serialized for a different algebra");
  }
  std::vector<Segment> segments;
  for (const json& entry : field(object, "segments")) {
    Segment segment;
    segment.direction = vector_from(field(entry, "direction"), algebra, "segment direction");
    segment.duration = rational_from(field(entry, "duration"), "segment duration");
    segments.push_back(std::move(segment));
  }
  return HorizontalPath(algebra, std::move(segments));
}

json parse_text(const std::string& text, const char* what) {
  json object = json::parse(text, nullptr, false);
  if (object.is_discarded()) {
    throw Error(ErrorCode::MalformedInput, std::string(what) + " is not valid JSON");
  }
  return object;
}

}  // namespace

std::string serialize_algebra(const AlgebraHandle& algebra) {
  if (!algebra) {
    throw Error(ErrorCode::MalformedInput, "cannot serialize a null algebra");
  }
  return algebra_json(algebra).dump(2) + "\n";
}

AlgebraHandle parse_algebra(const std::string& text) {
  return algebra_from(parse_text(text, "algebra description"));
}

std::string serialize_path(const HorizontalPath& path) {
  if (!path.algebra()) {
    throw Error(ErrorCode::MalformedInput, "cannot serialize a detached path");
  }
  return path_json(path).dump(2) + "\n";
}

HorizontalPath parse_path(const std::string& text, const AlgebraHandle& algebra) {
  if (!algebra) {
    throw Error(ErrorCode::MalformedInput, "parsing a path needs its algebra");
  }
  return path_from(parse_text(text, "path"), algebra);
}

std::string serialize_certificate(const ShortcutCertificate& certificate) {
  if (!certificate.algebra) {
    throw Error(ErrorCode::MalformedInput, "cannot serialize a certificate without an algebra");
  }
  json object = json::object();
  object["kind"] = "corner-shortcut-certificate";
  object["version"] = 1;
  object["algebra"] = algebra_json(certificate.algebra);
  object["norm"] = norm_tag(certificate.norm);
  object["x1"] = vector_json(certificate.x1);
  object["x2"] = vector_json(certificate.x2);
  object["eta"] = rational_json(certificate.eta);
  object["epsilon"] = rational_json(certificate.epsilon);
  object["candidate"] = path_json(certificate.candidate);
  object["corner_bound"] = bound_json(certificate.corner_bound);
  object["candidate_bound"] = bound_json(certificate.candidate_bound);
  object["margin"] = rational_json(certificate.margin);
  object["endpoint_ok"] = certificate.endpoint_ok;
  object["transcript"] = certificate.transcript;
  return object.dump(2) + "\n";
}

ShortcutCertificate parse_certificate(const std::string& text) {
  json object = parse_text(text, "certificate");
  const json& kind = field(object, "kind");
  if (!kind.is_string() || kind.get<std::string>() != "corner-shortcut-certificate") {
    throw Error(ErrorCode::MalformedInput, "not a corner shortcut certificate");
  }
  ShortcutCertificate certificate;
  certificate.algebra = algebra_from(field(object, "algebra"));
  const json& norm = field(object, "norm");
  if (!norm.is_string()) {
    throw Error(ErrorCode::MalformedInput, "norm tag must be a string");
  }
  certificate.norm = parse_norm(norm.get<std::string>());
  certificate.x1 = vector_from(field(object, "x1"), certificate.algebra, "x1");
  certificate.x2 = vector_from(field(object, "x2"), certificate.algebra, "x2");
  certificate.eta = rational_from(field(object, "eta"), "eta");
  certificate.epsilon = rational_from(field(object, "epsilon"), "epsilon");
  certificate.candidate = path_from(field(object, "candidate"), certificate.algebra);
  certificate.corner_bound = bound_from(field(object, "corner_bound"), "corner_bound");
  certificate.candidate_bound = bound_from(field(object, "candidate_bound"), "candidate_bound");
  certificate.margin = rational_from(field(object, "margin"), "margin");
  const json& endpoint_ok = field(object, "endpoint_ok");
  if (!endpoint_ok.is_boolean()) {
    throw Error(ErrorCode::MalformedInput, "endpoint_ok must be a boolean");
  }
  certificate.endpoint_ok = endpoint_ok.get<bool>();
  for (const json& line : field(object, "transcript")) {
    if (!line.is_string()) {
      throw Error(ErrorCode::MalformedInput, "transcript entries must be strings");
    }
    certificate.transcript.push_back(line.get<std::string>());
  }
  return certificate;
}

}  // namespace carnot
