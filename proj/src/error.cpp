#include "kalpha/error.hpp"

namespace kalpha {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegeneratePoint: return "DegeneratePoint";
    case ErrorCode::NonFiniteDerivative: return "NonFiniteDerivative";
    case ErrorCode::OffsetSingularity: return "OffsetSingularity";
    case ErrorCode::DegenerateCoefficients: return "DegenerateCoefficients";
    case ErrorCode::ZeroCurvature: return "ZeroCurvature";
    case ErrorCode::InvalidRadius: return "InvalidRadius";
    case ErrorCode::NoRealBranch: return "NoRealBranch";
    case ErrorCode::StiffStop: return "StiffStop";
    case ErrorCode::IntegrandDomainError: return "IntegrandDomainError";
    case ErrorCode::NonMonotone: return "NonMonotone";
    case ErrorCode::ConvexityLoss: return "ConvexityLoss";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::UnknownWitness: return "UnknownWitness";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace kalpha
