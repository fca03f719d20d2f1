#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kalpha/radius_profile.hpp"

namespace kalpha {

/// Why an integration ended.
enum class OdeStop {
  ReachedEnd,
  SlopeLimit,  // 1 - r'^2 fell below the slope margin
  RadiusZero,  // r reached 0
  BranchLost,  // -r' = K^alpha lost its admissible real branch
};

std::string to_string(OdeStop stop);

struct OdeOptions {
  double tolerance = 1e-10;  // absolute and relative per-step error
  double initial_step = 1e-3;
  double max_step = 0.02;
  double min_step = 1e-13;
  double slope_margin = kSlopeMargin;
};

struct OdeSolution {
  RadiusProfile profile;
  OdeStop stop = OdeStop::ReachedEnd;
  double s_stop = 0;  // last accepted s
  std::vector<double> s, r, dr, d2r;  // accepted steps in ascending s
  int accepted = 0;
  int rejected = 0;
};

/// K solving -r' = K^alpha, or nothing if no admissible real value exists.
/// For even integer alpha both signs are admissible; the one matching `previous_K` wins.
std::optional<double> curvature_from_slope(double alpha, double dr, double previous_K = 1.0);

/// r'' isolated from (r'' / (r (r r'' - 1 + r'^2)))^alpha = -r':
///   r'' = K r (1 - r'^2) / (K r^2 - 1),  K = (-r')^(1/alpha).
std::optional<double> radius_second_derivative(double alpha, double r, double dr,
                                               double previous_K = 1.0);

/// Integrates the rotational translator equation from (s0, r0, dr0) towards s1.
/// Domain failures end the run and are recorded in `stop`.
/// Throws NoRealBranch for inadmissible initial data and StiffStop on step-size underflow.
OdeSolution solve_radius_ode(double alpha, double r0, double dr0, double s0, double s1,
                             const OdeOptions& options = {});

}  // namespace kalpha
