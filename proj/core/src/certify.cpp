#include "carnot/certify.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "carnot/error.hpp"

namespace carnot {
namespace {

using nlohmann::json;

std::string hex64(unsigned long long value) {
  static const char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

std::string digest_lines(const std::vector<std::string>& lines) {
  unsigned long long hash = 1469598103934665603ull;
  for (const std::string& line : lines) {
    for (unsigned char c : line) {
      hash ^= c;
      hash *= 1099511628211ull;
    }
    hash ^= static_cast<unsigned char>('\n');
    hash *= 1099511628211ull;
  }
  return hex64(hash);
}

void write_file(const std::filesystem::path& file, const std::string& content) {
  std::ofstream out(file);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot open '" + file.string() + "' for writing");
  }
  out << content;
  if (!out.good()) {
    throw Error(ErrorCode::IoError, "failed to write '" + file.string() + "'");
  }
}

LieVector generator_from_coords(const AlgebraHandle& algebra,
                                const std::optional<std::vector<Rational>>& coords,
                                int canonical_index, const char* name) {
  LieVector v = zero_vector(algebra);
  if (!coords) {
    v.set_coord(canonical_index, Rational(1));
    return v;
  }
  if (coords->empty() || static_cast<int>(coords->size()) > algebra->rank()) {
    throw Error(ErrorCode::MalformedInput,
                std::string(name) + " needs between 1 and rank first-layer coordinates");
  }
  for (size_t i = 0; i < coords->size(); ++i) {
    v.set_coord(static_cast<int>(i), (*coords)[i]);
  }
  return v;
}

json bound_json(const CertifiedBound& bound) {
  return json{{"value", to_string(bound.value)},
              {"tolerance", to_string(bound.tolerance)},
              {"exact", bound.exact}};
}

}  // namespace

bool verify_endpoint(const ShortcutCertificate& certificate) {
  if (!certificate.algebra) {
    throw Error(ErrorCode::MalformedInput, "certificate has no algebra");
  }
  GroupPoint from = exp_point(certificate.x1);
  GroupPoint to = exp_point(certificate.x2);
  return endpoint(certificate.candidate, from) == to;
}

namespace {

// Tolerance for the independent recomputation: a quarter of what the stored
// bounds claim beyond the corner bound's own slack, falling back to the
// stored corner tolerance when nothing strict is claimed.
Rational recompute_tolerance(const ShortcutCertificate& certificate) {
  const Rational floor_value =
      certificate.corner_bound.exact ? Rational(0) : certificate.corner_bound.tolerance;
  const Rational claimed(certificate.margin - floor_value);
  if (claimed > 0) return Rational(claimed / 4);
  return certificate.corner_bound.tolerance > 0 ? certificate.corner_bound.tolerance
                                                : Rational(1, 1000000000);
}

}  // namespace

VerificationReport verify_certificate(const ShortcutCertificate& certificate) {
  VerificationReport report;
  report.margin = Rational(0);

  // Parameter consistency first: epsilon must be eta^(step-1) and the
  // generators must form a corner in the certificate's algebra.
  report.consistent = true;
  const int s = certificate.algebra->step();
  if (!(certificate.epsilon ==
        pow_rational(certificate.eta, static_cast<unsigned>(s > 1 ? s - 1 : 1)))) {
    report.consistent = false;
    report.notes.push_back("epsilon does not equal eta^(step-1)");
  }
  HorizontalPath corner;
  try {
    corner = make_corner(certificate.x1, certificate.x2);
  } catch (const Error& error) {
    report.consistent = false;
    report.notes.push_back(std::string("generators do not form a corner: ") + error.what());
  }
  if (!same_algebra(certificate.candidate.algebra(), certificate.algebra)) {
    report.consistent = false;
    report.notes.push_back("candidate path algebra differs from the certificate algebra");
  }

  report.endpoint_ok = report.consistent && verify_endpoint(certificate);
  if (report.consistent && !report.endpoint_ok) {
    report.notes.push_back("candidate path does not run from exp(x1) to exp(x2)");
  }

  if (report.consistent) {
    // Strict comparison, recomputed from scratch.  The stored margin only
    // sets the verification tolerance; if the claim is honest the
    // recomputed bounds must then still resolve the strict inequality.
    const Rational floor_value =
        certificate.corner_bound.exact ? Rational(0) : certificate.corner_bound.tolerance;
    if (!(certificate.margin > floor_value)) {
      report.notes.push_back("stored bounds do not claim a strict comparison");
    } else {
      const Rational verification_tolerance = recompute_tolerance(certificate);
      CertifiedBound corner_check =
          length_upper_bound(corner, certificate.norm, verification_tolerance);
      CertifiedBound candidate_check =
          length_upper_bound(certificate.candidate, certificate.norm, verification_tolerance);
      const Rational corner_floor =
          corner_check.exact ? Rational(0) : verification_tolerance;
      report.shorter_ok =
          Rational(corner_check.value - candidate_check.value) > corner_floor;
      report.margin = Rational(corner_check.value - candidate_check.value);
      std::ostringstream line;
      line << "recomputed: corner <= " << to_string(corner_check.value) << ", candidate <= "
           << to_string(candidate_check.value) << ", margin = " << to_string(report.margin);
      report.notes.push_back(line.str());
      if (!report.shorter_ok) {
        report.notes.push_back("recomputed bounds do not certify the strict comparison");
      }
    }
  }

  report.ok = report.consistent && report.endpoint_ok && report.shorter_ok;
  return report;
}

Rational certify_shorter(const ShortcutCertificate& certificate) {
  if (!verify_endpoint(certificate)) {
    throw Error(ErrorCode::EndpointMismatch,
                "candidate path does not run from exp(x1) to exp(x2)");
  }
  const Rational tolerance = recompute_tolerance(certificate);
  HorizontalPath corner = make_corner(certificate.x1, certificate.x2);
  CertifiedBound corner_check = length_upper_bound(corner, certificate.norm, tolerance);
  CertifiedBound candidate_check =
      length_upper_bound(certificate.candidate, certificate.norm, tolerance);
  return Rational(corner_check.value - candidate_check.value);
}

RunReport run_demo(const DemoConfig& config) {
  if (config.step_from < 1 || config.step_to < config.step_from) {
    throw Error(ErrorCode::MalformedInput, "demo step range is empty or starts below 1");
  }
  if (config.out_dir.empty()) {
    throw Error(ErrorCode::MalformedInput, "demo needs an output directory");
  }
  std::filesystem::path out_dir(config.out_dir);
  std::error_code fs_error;
  std::filesystem::create_directories(out_dir, fs_error);
  if (fs_error) {
    throw Error(ErrorCode::IoError,
                "cannot create output directory '" + config.out_dir + "': " + fs_error.message());
  }

  RunReport report;
  report.config = config;
  report.all_certified = true;

  for (int s = config.step_from; s <= config.step_to; ++s) {
    StepOutcome outcome;
    outcome.step = s;
    const auto started = std::chrono::steady_clock::now();
    try {
      AlgebraHandle algebra = build_free_nilpotent(2, s);
      LieVector x1 = generator_from_coords(algebra, config.x1_coords, 0, "x1");
      LieVector x2 = generator_from_coords(algebra, config.x2_coords, 1, "x2");
      ShortcutConfig shortcut_config;
      shortcut_config.norm = config.norm;
      shortcut_config.fixed_eta = config.fixed_eta;
      shortcut_config.margin_threshold = config.margin_threshold;
      shortcut_config.tolerance = config.tolerance;
      shortcut_config.max_halvings = config.max_halvings;
      ShortcutCertificate certificate = recursive_shortcut(x1, x2, shortcut_config);

      VerificationReport verification = verify_certificate(certificate);
      outcome.eta = certificate.eta;
      outcome.epsilon = certificate.epsilon;
      outcome.margin = certificate.margin;
      outcome.corner_bound = certificate.corner_bound;
      outcome.candidate_bound = certificate.candidate_bound;
      outcome.segment_count = certificate.candidate.size();
      outcome.transcript_digest = digest_lines(certificate.transcript);
      outcome.certified = verification.ok &&
                          certifies_shorter(certificate.corner_bound, certificate.candidate_bound);
      if (!verification.ok) {
        outcome.error = "self-verification failed";
        for (const std::string& note : verification.notes) {
          outcome.error += "; " + note;
        }
      }

      std::filesystem::path certificate_file =
          out_dir / ("cert-step-" + std::to_string(s) + ".json");
      write_file(certificate_file, serialize_certificate(certificate));
      outcome.certificate_file = certificate_file.filename().string();
    } catch (const Error& error) {
      outcome.certified = false;
      outcome.error = error.what();
    }
    const auto finished = std::chrono::steady_clock::now();
    outcome.seconds = std::chrono::duration<double>(finished - started).count();
    report.all_certified = report.all_certified && outcome.certified;
    report.steps.push_back(std::move(outcome));
  }

  write_file(out_dir / "report.json", serialize_report(report));
  return report;
}

std::string serialize_report(const RunReport& report) {
  json config = json::object();
  config["step_from"] = report.config.step_from;
  config["step_to"] = report.config.step_to;
  config["norm"] = norm_tag(report.config.norm);
  config["eta"] = report.config.fixed_eta ? to_string(*report.config.fixed_eta)
                                          : std::string("auto");
  config["margin_threshold"] = to_string(report.config.margin_threshold);
  config["tolerance"] = to_string(report.config.tolerance);
  config["max_halvings"] = report.config.max_halvings;
  config["out_dir"] = report.config.out_dir;
  auto coords_json = [](const std::optional<std::vector<Rational>>& coords) {
    if (!coords) return json("canonical");
    json list = json::array();
    for (const Rational& c : *coords) list.push_back(to_string(c));
    return list;
  };
  config["x1"] = coords_json(report.config.x1_coords);
  config["x2"] = coords_json(report.config.x2_coords);

  json steps = json::array();
  for (const StepOutcome& outcome : report.steps) {
    json entry = json::object();
    entry["step"] = outcome.step;
    entry["certified"] = outcome.certified;
    if (outcome.error.empty()) {
      entry["eta"] = to_string(outcome.eta);
      entry["epsilon"] = to_string(outcome.epsilon);
      entry["margin"] = to_string(outcome.margin);
      entry["corner_bound"] = bound_json(outcome.corner_bound);
      entry["candidate_bound"] = bound_json(outcome.candidate_bound);
      entry["segments"] = outcome.segment_count;
      entry["certificate"] = outcome.certificate_file;
      entry["transcript_digest"] = outcome.transcript_digest;
    } else {
      entry["error"] = outcome.error;
    }
    entry["seconds"] = outcome.seconds;
    steps.push_back(entry);
  }

  json object = json::object();
  object["kind"] = "corner-demo-report";
  object["config"] = config;
  object["steps"] = steps;
  object["all_certified"] = report.all_certified;
  return object.dump(2) + "\n";
}

}  // namespace carnot
