#pragma once

#include <stdexcept>
#include <string>

namespace negdep {

enum class ErrorCode {
  Parse,
  ZeroMass,
  ZeroProbabilityCondition,
  CapExceeded,
  ParameterOutOfRange,
  DimensionMismatch,
  PreconditionViolated,
  OddDimension,
  OddGroundSet,
  InvalidDistribution,
  Disconnected,
  UnknownTarget,
  Inconsistent,
  NoVerdict,
  Io,
};

const char* error_code_name(ErrorCode c);

// All core failures are reported through this exception; the C layer maps it
// onto status codes and a thread-local message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace negdep
