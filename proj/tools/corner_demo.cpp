// corner-demo: build certified shortcuts around a corner, verify stored
// certificates, and export algebra descriptions.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "carnot/certify.hpp"
#include "carnot/error.hpp"

namespace {

using namespace carnot;

std::string show(const Rational& value) {
  std::ostringstream out;
  const double rough = Rational(value).get_d();
  out << to_string(value) << " (~" << rough << ")";
  return out.str();
}

std::vector<Rational> parse_coords(const std::string& text) {
  std::vector<Rational> coords;
  std::string piece;
  std::istringstream stream(text);
  while (std::getline(stream, piece, ',')) {
    coords.push_back(parse_rational(piece));
  }
  if (coords.empty()) {
    throw Error(ErrorCode::MalformedInput, "expected comma-separated rational coordinates");
  }
  return coords;
}

void parse_step_range(const std::string& text, int& from, int& to) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      from = to = std::stoi(text);
    } else {
      from = std::stoi(text.substr(0, dots));
      to = std::stoi(text.substr(dots + 2));
    }
  } catch (const std::exception&) {
    throw Error(ErrorCode::MalformedInput, "step must be a number n or a range a..b");
  }
  if (from < 1 || to < from) {
    throw Error(ErrorCode::MalformedInput, "step range is empty or starts below 1");
  }
}

std::string default_out_dir() {
  if (const char* env = std::getenv("CORNER_DEMO_OUT"); env != nullptr && *env != '\0') {
    return env;
  }
  return "corner-demo-out";
}

int command_run(const std::string& step_text, const std::string& norm_tag_text,
                const std::string& x1_text, const std::string& x2_text,
                const std::string& eta_text, const std::string& margin_text,
                const std::string& out_dir) {
  DemoConfig config;
  parse_step_range(step_text, config.step_from, config.step_to);
  config.norm = parse_norm(norm_tag_text);
  if (!x1_text.empty()) config.x1_coords = parse_coords(x1_text);
  if (!x2_text.empty()) config.x2_coords = parse_coords(x2_text);
  if (eta_text != "auto") config.fixed_eta = parse_rational(eta_text);
  config.margin_threshold = parse_rational(margin_text);
  if (config.margin_threshold < 0) {
    throw Error(ErrorCode::MalformedInput, "the margin threshold must be nonnegative");
  }
  config.out_dir = out_dir;

  RunReport report = run_demo(config);
  for (const StepOutcome& outcome : report.steps) {
    if (outcome.error.empty()) {
      std::cout << "step " << outcome.step << ": " << (outcome.certified ? "certified" : "NOT certified")
                << ", margin = " << show(outcome.margin) << ", eta = " << show(outcome.eta)
                << ", " << outcome.segment_count << " segments, " << outcome.seconds << " s\n";
      std::cout << "  certificate: " << outcome.certificate_file << "\n";
    } else {
      std::cout << "step " << outcome.step << ": FAILED: " << outcome.error << "\n";
    }
  }
  std::cout << "report: " << config.out_dir << "/report.json\n";
  std::cout << (report.all_certified ? "all steps certified" : "not all steps certified") << "\n";
  return report.all_certified ? 0 : 1;
}

int command_verify(const std::string& certificate_file) {
  std::ifstream in(certificate_file);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot read '" + certificate_file + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  ShortcutCertificate certificate = parse_certificate(buffer.str());

  VerificationReport report = verify_certificate(certificate);
  std::cout << "parameters consistent: " << (report.consistent ? "yes" : "NO") << "\n";
  std::cout << "endpoint identity:     " << (report.endpoint_ok ? "exact" : "FAILED") << "\n";
  std::cout << "strictly shorter:      " << (report.shorter_ok ? "certified" : "NOT certified")
            << "\n";
  if (report.shorter_ok) {
    std::cout << "recomputed margin:     " << show(report.margin) << "\n";
  }
  for (const std::string& note : report.notes) {
    std::cout << "note: " << note << "\n";
  }
  std::cout << (report.ok ? "certificate verified" : "certificate rejected") << "\n";
  return report.ok ? 0 : 1;
}

int command_algebra(int rank, int step, const std::string& emit_file) {
  AlgebraHandle algebra = build_free_nilpotent(rank, step);
  std::ofstream out(emit_file);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write '" + emit_file + "'");
  }
  out << serialize_algebra(algebra);
  if (!out.good()) {
    throw Error(ErrorCode::IoError, "failed to write '" + emit_file + "'");
  }
  std::cout << "wrote " << emit_file << " (dimension " << algebra->dim() << ", step "
            << algebra->step() << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified shortcuts around corner paths in stratified groups"};
  app.require_subcommand(1);

  std::string step_text;
  std::string norm_text = "euclidean";
  std::string x1_text;
  std::string x2_text;
  std::string eta_text = "auto";
  std::string margin_text = "0";
  std::string out_dir = default_out_dir();
  CLI::App* run = app.add_subcommand("run", "build and certify shortcuts for a step range");
  run->add_option("--step", step_text, "step n or range a..b")->required();
  run->add_option("--norm", norm_text, "euclidean or lp:<p/q> with 1 < p < infinity");
  run->add_option("--x1", x1_text, "first generator, comma-separated rational coordinates");
  run->add_option("--x2", x2_text, "second generator, comma-separated rational coordinates");
  run->add_option("--eta", eta_text, "fixed eta p/q, or auto to search");
  run->add_option("--margin", margin_text, "required certified margin (rational)");
  run->add_option("--out", out_dir, "output directory (default: $CORNER_DEMO_OUT)");

  std::string certificate_file;
  CLI::App* verify = app.add_subcommand("verify", "independently verify a stored certificate");
  verify->add_option("certificate", certificate_file, "certificate file to verify")->required();

  int rank = 2;
  int step = 2;
  std::string emit_file;
  CLI::App* algebra = app.add_subcommand("algebra", "emit a free nilpotent algebra description");
  algebra->add_option("--rank", rank, "number of generators");
  algebra->add_option("--step", step, "nilpotency step")->required();
  algebra->add_option("--emit", emit_file, "output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return command_run(step_text, norm_text, x1_text, x2_text, eta_text, margin_text, out_dir);
    }
    if (verify->parsed()) {
      return command_verify(certificate_file);
    }
    return command_algebra(rank, step, emit_file);
  } catch (const Error& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  }
}
