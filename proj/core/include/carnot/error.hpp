#pragma once

#include <stdexcept>
#include <string>

namespace carnot {

// Every failure mode carries a stable code so callers and tests can react to
// the condition instead of parsing message text.
enum class ErrorCode {
  MalformedInput,
  AntisymmetryViolation,
  JacobiViolation,
  GradingViolation,
  NotGenerated,
  MixedAlgebras,
  WrongLayer,
  MixedLayers,
  LinearlyDependent,
  NotStrictlyConvex,
  EpsilonOutOfRange,
  EtaOutOfRange,
  AbelianStep1,
  UnsupportedRank,
  InnerNotShorter,
  EpsilonSearchExhausted,
  EndpointMismatch,
  InvariantViolation,
  IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace carnot
