#include "uavlos/error.hpp"

namespace uavlos {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDegenerateFrame: return "degenerate-frame";
    case ErrorCode::kUnsupportedInput: return "unsupported-input";
    case ErrorCode::kUndefinedAngle: return "undefined-angle";
    case ErrorCode::kNoCrossing: return "no-crossing";
    case ErrorCode::kInvalidReference: return "invalid-reference";
    case ErrorCode::kNotPermissible: return "not-permissible";
    case ErrorCode::kInvalidMap: return "invalid-map";
    case ErrorCode::kGenerationFailure: return "generation-failure";
    case ErrorCode::kSamplingFailure: return "sampling-failure";
    case ErrorCode::kNoInitialPoint: return "no-initial-point";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kInvalidStart: return "invalid-start";
    case ErrorCode::kGuardViolation: return "guard-violation";
    case ErrorCode::kUnsupportedConfiguration: return "unsupported-configuration";
    case ErrorCode::kNoCandidate: return "no-candidate";
    case ErrorCode::kConfiguration: return "configuration";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace uavlos
