#pragma once

#include <Eigen/Dense>

#include <optional>
#include <utility>
#include <vector>

#include "kalpha/surface_chart.hpp"

namespace kalpha {

/// Geometric record at one chart point.
struct CurvatureSample {
  Vec3 position, xs, xt, xss, xst, xtt;
  Vec3 normal;
  double E = 0, F = 0, G = 0;  // first fundamental form
  double e = 0, f = 0, g = 0;  // second fundamental form, e = <X_ss, U>
  double K = 0, H = 0;
  double k1 = 0, k2 = 0;  // k1 >= k2
};

/// Default regularity threshold; |X_s x X_theta| below this times scale^2 is degenerate.
inline constexpr double kRegularityThreshold = 1e-9;

/// Throws DegeneratePoint at chart singularities.
Vec3 unit_normal(const SurfaceChart& chart, double s, double theta);

/// Throws DegeneratePoint or NonFiniteDerivative.
CurvatureSample curvature_sample(const SurfaceChart& chart, double s, double theta);

/// Shape operator in the (X_s, X_theta) basis: (I-form)^-1 (II-form).
Eigen::Matrix2d shape_operator(const CurvatureSample& sample);

/// (K, H) of a point; the input to the closed-form offset and translator checks.
struct CurvaturePair {
  double K = 0;
  double H = 0;
};

struct GridSpec {
  int n_s = 2;
  int n_theta = 2;

  /// Throws InvalidArgument unless both counts are at least 2.
  void validate() const;
  /// Uniform nodes including both ends of each domain interval.
  [[nodiscard]] std::pair<double, double> node(const ChartDomain& domain, int i, int j) const;
};

struct SampleFlags {
  bool degenerate = false;
  bool non_finite = false;
  bool near_parabolic = false;
};

struct GridPoint {
  int i = 0, j = 0;
  double s = 0, theta = 0;
  std::optional<CurvatureSample> sample;
  SampleFlags flags;
};

struct SampleOptions {
  double parabolic_tolerance = 1e-8;
};

/// Row-major (s outer, theta inner) samples; failures are flagged per point.
std::vector<GridPoint> sample_grid(const SurfaceChart& chart, const GridSpec& grid,
                                   const SampleOptions& options = {});

/// (K, H) of every non-degenerate grid point.
std::vector<CurvaturePair> curvature_pairs(const std::vector<GridPoint>& points);

}  // namespace kalpha
