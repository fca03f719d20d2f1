#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kalpha/curvature.hpp"
#include "kalpha/surface_chart.hpp"

namespace kalpha {

/// Focal-point tolerance on |1 - 2 lambda H + lambda^2 K|.
inline constexpr double kFocalTolerance = 1e-10;

/// The parallel surface X + lambda U of a base chart.
///
/// The offset chart keeps the base orientation flag, so its normal equals
/// epsilon * U with epsilon the sign of 1 - 2 lambda H + lambda^2 K.
struct ParallelSurface {
  SurfaceChart base;
  double lambda = 0.0;
  SurfaceChart chart;
};

/// 1 - 2 lambda H + lambda^2 K = (1 - lambda k1)(1 - lambda k2).
double offset_factor(double K, double H, double lambda);

/// Throws InvalidArgument for lambda == 0 and OffsetSingularity when a survey node is focal.
ParallelSurface build_parallel(const SurfaceChart& base, double lambda,
                               const GridSpec& survey = {9, 9});

struct OffsetSignSurvey {
  std::vector<int> epsilon;  // row-major over the survey grid, 0 at degenerate base points
  bool constant = true;
};

/// Per-point epsilon over a grid; throws OffsetSingularity at focal points.
OffsetSignSurvey survey_offset_sign(const SurfaceChart& base, double lambda, const GridSpec& grid);

struct ParallelCurvatures {
  double K = 0;
  double H = 0;  // against the base normal U
  int epsilon = 1;
};

/// Closed-form curvatures of the parallel surface; throws OffsetSingularity at focal points.
ParallelCurvatures parallel_curvatures(double K, double H, double lambda);

/// Which of the two same-speed conditions hold on a sample set.
struct SameSpeedVerdict {
  double lambda = 0;
  double alpha = 0;
  double tolerance = 0;
  double case_i_residual = 0;       // max |lambda K - 2H|
  double case_i_dual_residual = 0;  // max |lambda Kbar + 2 Hbar|
  bool case_ii_applicable = false;  // alpha is an odd integer
  double case_ii_residual = 0;      // max |lambda^2 K - 2 lambda H + 2|
  double case_ii_dual_residual = 0; // max |lambda^2 Kbar + 2 lambda Hbar + 2|
  bool case_i = false;
  bool case_ii = false;
  bool epsilon_constant = true;
  std::string note;

  [[nodiscard]] bool any() const noexcept { return case_i || case_ii; }
};

SameSpeedVerdict check_same_speed_conditions(std::span<const CurvaturePair> samples,
                                             double lambda, double alpha,
                                             double tolerance = 1e-8);

bool is_odd_integer(double alpha);

/// Half-offset consequences: minimality (case i) or K = -4/lambda^2 (case ii) at lambda/2.
struct HalfOffsetVerdict {
  bool case_i = false;
  bool case_ii = false;
  double half_mean_curvature = 0;      // max |Hbar| at lambda/2
  double half_gauss_deviation = 0;     // max |Kbar + 4/lambda^2| at lambda/2
  bool minimal = false;                // case i holds and Hbar vanishes
  bool constant_gauss = false;         // case ii holds and Kbar = -4/lambda^2
  bool sign_constant = true;
};

HalfOffsetVerdict half_offset_checks(std::span<const CurvaturePair> samples, double lambda,
                                     double tolerance = 1e-8);

/// Coefficients of a K + 2 b H + c = 0.
struct WeingartenCoeffs {
  double a = 0;
  double b = 0;
  double c = 0;

  /// Throws DegenerateCoefficients for (0, 0, 0).
  static WeingartenCoeffs homogeneous(double a, double b, double c);
  /// a K + b H = 1.
  static WeingartenCoeffs unit_normalized(double a, double b);
  /// H = c K.
  static WeingartenCoeffs mean_proportional(double c);

  [[nodiscard]] double residual(double K, double H) const { return a * K + 2 * b * H + c; }
};

/// Coefficients satisfied by the parallel surface at distance lambda.
WeingartenCoeffs weingarten_transfer(const WeingartenCoeffs& coeffs, double lambda);

struct ScaledSpeed {
  double lambda = 0;  // -a/b
  double mu = 0;      // b^2 / (b^2 - ac)
  int epsilon = 1;    // sign of b^2 - ac
  std::optional<double> speed_factor;  // epsilon mu^alpha when real
  double max_relative_residual = 0;    // max |Kbar - mu K| / max(|mu K|, 1) over samples
};

/// Throws DegenerateCoefficients when b = 0 or b^2 = ac.
ScaledSpeed scaled_speed_translator(const WeingartenCoeffs& coeffs,
                                    std::span<const CurvaturePair> samples, double alpha);

}  // namespace kalpha
