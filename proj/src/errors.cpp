#include "negdep/errors.hpp"

namespace negdep {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::ZeroProbabilityCondition: return "ZeroProbabilityCondition";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::OddDimension: return "OddDimension";
    case ErrorCode::OddGroundSet: return "OddGroundSet";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::UnknownTarget: return "UnknownTarget";
    case ErrorCode::Inconsistent: return "Inconsistent";
    case ErrorCode::NoVerdict: return "NoVerdict";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace negdep
