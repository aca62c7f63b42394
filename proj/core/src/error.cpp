#include "carnot/error.hpp"

namespace carnot {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::AntisymmetryViolation: return "AntisymmetryViolation";
    case ErrorCode::JacobiViolation: return "JacobiViolation";
    case ErrorCode::GradingViolation: return "GradingViolation";
    case ErrorCode::NotGenerated: return "NotGenerated";
    case ErrorCode::MixedAlgebras: return "MixedAlgebras";
    case ErrorCode::WrongLayer: return "WrongLayer";
    case ErrorCode::MixedLayers: return "MixedLayers";
    case ErrorCode::LinearlyDependent: return "LinearlyDependent";
    case ErrorCode::NotStrictlyConvex: return "NotStrictlyConvex";
    case ErrorCode::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorCode::EtaOutOfRange: return "EtaOutOfRange";
    case ErrorCode::AbelianStep1: return "AbelianStep1";
    case ErrorCode::UnsupportedRank: return "UnsupportedRank";
    case ErrorCode::InnerNotShorter: return "InnerNotShorter";
    case ErrorCode::EpsilonSearchExhausted: return "EpsilonSearchExhausted";
    case ErrorCode::EndpointMismatch: return "EndpointMismatch";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string("[") + error_code_name(code) + "] " + message),
      code_(code) {}

}  // namespace carnot
