// Tests for serialization round-trips, independent certificate
// verification, and the demo driver's file output.
#include "doctest.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "carnot/algebra.hpp"
#include "carnot/certify.hpp"
#include "carnot/error.hpp"
#include "carnot/group.hpp"
#include "carnot/path.hpp"
#include "carnot/serialize.hpp"
#include "carnot/shortcut.hpp"

#include "support.hpp"

using carnot::basis_vector;
using carnot::build_free_nilpotent;
using carnot::certifies_shorter;
using carnot::certify_shorter;
using carnot::DemoConfig;
using carnot::endpoint;
using carnot::ErrorCode;
using carnot::exp_point;
using carnot::HorizontalPath;
using carnot::LieVector;
using carnot::make_corner;
using carnot::make_norm;
using carnot::NormFamily;
using carnot::parse_algebra;
using carnot::parse_certificate;
using carnot::parse_path;
using carnot::Rational;
using carnot::recursive_shortcut;
using carnot::run_demo;
using carnot::serialize_algebra;
using carnot::serialize_certificate;
using carnot::serialize_path;
using carnot::ShortcutCertificate;
using carnot::ShortcutConfig;
using carnot::verify_certificate;
using carnot::verify_endpoint;

namespace {

ShortcutCertificate step2_certificate() {
  auto algebra = build_free_nilpotent(2, 2);
  ShortcutConfig config;
  return recursive_shortcut(basis_vector(algebra, 0), basis_vector(algebra, 1), config);
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  REQUIRE(in.good());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

// Unique scratch directory, removed on destruction.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           (tag + "-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter()++));
    std::filesystem::remove_all(path);
  }
  ~TempDir() {
    std::error_code ignored;
    std::filesystem::remove_all(path, ignored);
  }
  static int& counter() {
    static int value = 0;
    return value;
  }
};

}  // namespace

TEST_CASE("algebras round-trip through their JSON form") {
  for (auto algebra : {build_free_nilpotent(2, 4), build_free_nilpotent(3, 2)}) {
    auto text = serialize_algebra(algebra);
    auto back = parse_algebra(text);
    CHECK(carnot::same_algebra(algebra, back));
    CHECK(back->digest() == algebra->digest());
    CHECK(back->layer_dims() == algebra->layer_dims());
    for (int i = 0; i < algebra->dim(); ++i) {
      CHECK(back->basis_label(i) == algebra->basis_label(i));
    }
  }
  CHECK(testutil::error_code_of([] { parse_algebra("not json at all"); }) ==
        ErrorCode::MalformedInput);
  CHECK(testutil::error_code_of([] { parse_algebra("{\"layers\": []}"); }) ==
        ErrorCode::MalformedInput);
}

TEST_CASE("paths round-trip and refuse foreign algebras") {
  auto algebra = build_free_nilpotent(2, 3);
  testutil::TestRng rng(111);
  for (int trial = 0; trial < 10; ++trial) {
    auto path = rng.path(algebra, 1, 7);
    auto back = parse_path(serialize_path(path), algebra);
    REQUIRE(back.size() == path.size());
    for (int i = 0; i < path.size(); ++i) {
      CHECK(back.segments()[static_cast<std::size_t>(i)].direction ==
            path.segments()[static_cast<std::size_t>(i)].direction);
      CHECK(back.segments()[static_cast<std::size_t>(i)].duration ==
            path.segments()[static_cast<std::size_t>(i)].duration);
    }
    CHECK(endpoint(back) == endpoint(path));
  }

  auto path = rng.path(algebra, 1, 4);
  auto other = build_free_nilpotent(2, 4);
  CHECK(testutil::error_code_of([&] { parse_path(serialize_path(path), other); }) ==
        ErrorCode::MalformedInput);
}

TEST_CASE("certificates round-trip with everything intact") {
  auto cert = step2_certificate();
  auto text = serialize_certificate(cert);
  auto back = parse_certificate(text);

  CHECK(carnot::same_algebra(back.algebra, cert.algebra));
  CHECK(back.norm.family == cert.norm.family);
  CHECK(back.x1 == cert.x1);
  CHECK(back.x2 == cert.x2);
  CHECK(back.eta == cert.eta);
  CHECK(back.epsilon == cert.epsilon);
  CHECK(back.margin == cert.margin);
  CHECK(back.corner_bound.value == cert.corner_bound.value);
  CHECK(back.corner_bound.exact == cert.corner_bound.exact);
  CHECK(back.candidate_bound.value == cert.candidate_bound.value);
  CHECK(back.endpoint_ok == cert.endpoint_ok);
  CHECK(back.transcript == cert.transcript);
  CHECK(back.candidate.size() == cert.candidate.size());

  // serialization is deterministic
  CHECK(serialize_certificate(back) == text);
}

TEST_CASE("parsing rejects damaged certificates") {
  CHECK(testutil::error_code_of([] { parse_certificate("{{{{"); }) == ErrorCode::MalformedInput);

  auto cert = step2_certificate();
  auto text = serialize_certificate(cert);

  auto json = nlohmann::json::parse(text);
  json.erase("eta");
  const std::string missing = json.dump();
  CHECK(testutil::error_code_of([&] { parse_certificate(missing); }) ==
        ErrorCode::MalformedInput);

  auto bad_rational = nlohmann::json::parse(text);
  bad_rational["eta"] = "one tenth";
  const std::string garbled = bad_rational.dump();
  CHECK(testutil::error_code_of([&] { parse_certificate(garbled); }) ==
        ErrorCode::MalformedInput);
}

TEST_CASE("endpoint verification is exact and unforgiving") {
  auto cert = step2_certificate();
  CHECK(verify_endpoint(cert));

  // nudging one duration by one part in a billion breaks the identity
  auto perturbed = cert;
  auto segments = perturbed.candidate.segments();
  segments[0].duration += Rational(1, 1000000000);
  perturbed.candidate = HorizontalPath(perturbed.candidate.algebra(), segments);
  CHECK_FALSE(verify_endpoint(perturbed));
  CHECK(testutil::error_code_of([&] { certify_shorter(perturbed); }) ==
        ErrorCode::EndpointMismatch);
}

TEST_CASE("full verification recomputes the claim from scratch") {
  SUBCASE("a fresh step-2 certificate verifies") {
    auto cert = step2_certificate();
    auto report = verify_certificate(cert);
    CHECK(report.consistent);
    CHECK(report.endpoint_ok);
    CHECK(report.shorter_ok);
    CHECK(report.ok);
    CHECK(report.margin > Rational(38, 1000));
    CHECK(certify_shorter(cert) > Rational(38, 1000));
  }

  SUBCASE("a reparsed step-4 certificate verifies") {
    auto algebra = build_free_nilpotent(2, 4);
    ShortcutConfig config;
    config.margin_threshold = Rational(0);
    auto cert = recursive_shortcut(basis_vector(algebra, 0), basis_vector(algebra, 1), config);
    auto back = parse_certificate(serialize_certificate(cert));
    auto report = verify_certificate(back);
    CHECK(report.consistent);
    CHECK(report.endpoint_ok);
    CHECK(report.shorter_ok);
    CHECK(report.ok);
    CHECK(report.margin > 0);
  }

  SUBCASE("the corner itself never certifies against the corner") {
    auto algebra = build_free_nilpotent(2, 2);
    auto x1 = basis_vector(algebra, 0);
    auto x2 = basis_vector(algebra, 1);
    ShortcutCertificate cert;
    cert.algebra = algebra;
    cert.norm = make_norm(NormFamily::Euclidean);
    cert.x1 = x1;
    cert.x2 = x2;
    cert.eta = Rational(1, 10);
    cert.epsilon = Rational(1, 10);
    cert.candidate = make_corner(x1, x2);
    cert.corner_bound = {Rational(2), Rational(0), true};
    cert.candidate_bound = {Rational(2), Rational(0), true};
    cert.margin = Rational(0);
    cert.endpoint_ok = true;

    CHECK(verify_endpoint(cert));
    CHECK(certify_shorter(cert) == 0);
    CHECK_FALSE(certifies_shorter(cert.corner_bound, cert.candidate_bound));
    auto report = verify_certificate(cert);
    CHECK(report.consistent);
    CHECK_FALSE(report.shorter_ok);
    CHECK_FALSE(report.ok);
  }

  SUBCASE("tampered parameters are flagged as inconsistent") {
    auto cert = step2_certificate();
    cert.eta = Rational(1, 3);  // no longer matches epsilon
    auto report = verify_certificate(cert);
    CHECK_FALSE(report.consistent);
    CHECK_FALSE(report.ok);
  }

  SUBCASE("a perturbed path fails endpoint verification") {
    auto cert = step2_certificate();
    auto segments = cert.candidate.segments();
    segments[2].duration *= Rational(1000001, 1000000);
    cert.candidate = HorizontalPath(cert.candidate.algebra(), segments);
    auto report = verify_certificate(cert);
    CHECK(report.consistent);
    CHECK_FALSE(report.endpoint_ok);
    CHECK_FALSE(report.ok);
  }
}

TEST_CASE("the demo driver writes certificates and a report") {
  TempDir dir("corner-demo-test");
  DemoConfig config;
  config.step_from = 2;
  config.step_to = 3;
  config.out_dir = dir.path.string();

  auto report = run_demo(config);
  CHECK(report.all_certified);
  REQUIRE(report.steps.size() == 2);
  for (const auto& outcome : report.steps) {
    CHECK(outcome.certified);
    CHECK(outcome.margin > 0);
    CHECK(outcome.error.empty());
    // certificate files are named relative to the output directory, so the
    // report stays valid if the directory is moved wholesale
    auto file = dir.path / outcome.certificate_file;
    CHECK(std::filesystem::exists(file));

    // every written certificate re-verifies independently
    auto cert = parse_certificate(read_file(file));
    CHECK(verify_certificate(cert).ok);
    CHECK(cert.algebra->step() == outcome.step);
    CHECK(cert.margin == outcome.margin);
  }
  CHECK(std::filesystem::exists(dir.path / "report.json"));

  // the report text is valid JSON and echoes the outcome
  auto parsed = nlohmann::json::parse(carnot::serialize_report(report));
  CHECK(parsed["all_certified"].get<bool>());
  CHECK(parsed["steps"].size() == 2);

  // reruns are byte-identical: the whole pipeline is deterministic
  TempDir second("corner-demo-test-rerun");
  auto rerun_config = config;
  rerun_config.out_dir = second.path.string();
  auto rerun = run_demo(rerun_config);
  REQUIRE(rerun.steps.size() == report.steps.size());
  for (std::size_t i = 0; i < report.steps.size(); ++i) {
    CHECK(read_file(dir.path / report.steps[i].certificate_file) ==
          read_file(second.path / rerun.steps[i].certificate_file));
  }
}

TEST_CASE("the demo driver validates its configuration") {
  DemoConfig config;
  config.out_dir = "";
  CHECK(testutil::error_code_of([&] { run_demo(config); }) == ErrorCode::MalformedInput);

  config.out_dir = "/proc/nonexistent/corner-demo";
  CHECK(testutil::error_code_of([&] { run_demo(config); }) == ErrorCode::IoError);

  TempDir dir("corner-demo-range");
  config.out_dir = dir.path.string();
  config.step_from = 3;
  config.step_to = 2;
  CHECK(testutil::error_code_of([&] { run_demo(config); }) == ErrorCode::MalformedInput);
}

TEST_CASE("demo failures are recorded per step instead of aborting") {
  TempDir dir("corner-demo-fail");
  DemoConfig config;
  config.step_from = 1;  // abelian: no corner beats a straight segment
  config.step_to = 2;
  config.out_dir = dir.path.string();

  auto report = run_demo(config);
  REQUIRE(report.steps.size() == 2);
  CHECK_FALSE(report.all_certified);
  CHECK_FALSE(report.steps[0].certified);
  CHECK_FALSE(report.steps[0].error.empty());
  CHECK(report.steps[1].certified);
}
