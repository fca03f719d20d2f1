#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kalpha {

enum class ErrorCode {
  InvalidArgument,
  DegeneratePoint,
  NonFiniteDerivative,
  OffsetSingularity,
  DegenerateCoefficients,
  ZeroCurvature,
  InvalidRadius,
  NoRealBranch,
  StiffStop,
  IntegrandDomainError,
  NonMonotone,
  ConvexityLoss,
  StepTooLarge,
  UnknownWitness,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kalpha
