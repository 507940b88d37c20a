#include "adaptnet/error.hpp"

namespace adaptnet {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kConnectivity: return "connectivity";
    case ErrorKind::kStructure: return "structure";
    case ErrorKind::kIterationLimit: return "iteration-limit";
    case ErrorKind::kStability: return "stability";
    case ErrorKind::kNumerical: return "numerical";
    case ErrorKind::kAccuracy: return "accuracy";
    case ErrorKind::kModel: return "model";
    case ErrorKind::kObservability: return "observability";
    case ErrorKind::kContract: return "contract";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kDivergence: return "divergence";
    case ErrorKind::kConfig: return "config";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind) {}

}  // namespace adaptnet
