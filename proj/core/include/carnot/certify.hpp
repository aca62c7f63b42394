// Independent certificate verification and the demonstration driver that
// certifies a range of steps and writes certificates plus a run report.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "carnot/serialize.hpp"

namespace carnot {

struct VerificationReport {
  bool endpoint_ok = false;  // exact endpoint identity of the stored path
  bool shorter_ok = false;   // strict length comparison, recomputed
  bool consistent = false;   // stored parameters agree with each other
  bool ok = false;           // all of the above
  Rational margin;           // independently recomputed margin
  std::vector<std::string> notes;
};

// Exact endpoint identity of the stored candidate path.
bool verify_endpoint(const ShortcutCertificate& certificate);

// Full independent check of a parsed certificate.  The length comparison is
// recomputed from the stored path and generators at a verification
// tolerance derived from the stored margin, so a certificate with a tiny
// but genuine margin still verifies, and no stored bound is taken on faith.
VerificationReport verify_certificate(const ShortcutCertificate& certificate);

// Recomputed margin: corner bound minus candidate bound, both rebuilt from
// the stored generators and path.  Requires the exact endpoint identity
// first and throws EndpointMismatch without it.  A positive value certifies
// that the corner is not length minimizing for these generators.
Rational certify_shorter(const ShortcutCertificate& certificate);

struct DemoConfig {
  int step_from = 2;
  int step_to = 2;
  FirstLayerNorm norm = make_norm(NormFamily::Euclidean);
  // Generator coordinates over the first layer; canonical basis vectors
  // when absent.
  std::optional<std::vector<Rational>> x1_coords;
  std::optional<std::vector<Rational>> x2_coords;
  std::optional<Rational> fixed_eta;
  // The demo's contract is strict positivity (margins at steps 4 and 5 are
  // genuinely tiny), so no threshold is imposed by default.
  Rational margin_threshold = Rational(0);
  Rational tolerance = Rational(1, 1000000000);
  int max_halvings = 40;
  std::string out_dir;
};

struct StepOutcome {
  int step = 0;
  bool certified = false;  // certificate produced and self-verified
  Rational eta;
  Rational epsilon;
  Rational margin;
  CertifiedBound corner_bound;
  CertifiedBound candidate_bound;
  int segment_count = 0;
  double seconds = 0.0;
  std::string certificate_file;
  std::string transcript_digest;
  std::string error;  // nonempty when the step failed
};

struct RunReport {
  DemoConfig config;
  std::vector<StepOutcome> steps;
  bool all_certified = false;
};

// Certify each step in the configured range in its free rank-2 algebra,
// writing cert-step-<s>.json per step and report.json into the output
// directory.  Failures are recorded per step; the run does not stop early.
RunReport run_demo(const DemoConfig& config);

std::string serialize_report(const RunReport& report);

}  // namespace carnot
