#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>

#include "kalpha/finite_difference.hpp"

namespace kalpha {

using Vec3 = Eigen::Vector3d;

/// Parameter rectangle [s_min, s_max] x [theta_min, theta_max].
struct ChartDomain {
  double s_min = 0.0;
  double s_max = 1.0;
  double theta_min = 0.0;
  double theta_max = 1.0;
  bool periodic_theta = false;

  [[nodiscard]] fd::Interval s_interval() const { return {s_min, s_max, false}; }
  [[nodiscard]] fd::Interval theta_interval() const { return {theta_min, theta_max, periodic_theta}; }
  [[nodiscard]] bool contains(double s, double theta) const;
};

struct TangentJet {
  Vec3 x, xs, xt;
};

/// Position with first and second partials; `t` stands for theta.
struct ChartJet {
  Vec3 x, xs, xt, xss, xst, xtt;
};

enum class DerivativeSource {
  Analytic,          ///< full jet supplied
  AnalyticTangents,  ///< first partials supplied, second partials differenced from them
  FiniteDifference,  ///< everything differenced from point evaluations
};

/// Step sizes as fractions of the domain width in each variable.
struct FiniteDifferenceSteps {
  double first = 1e-4;
  double second = 1e-4;
};

/// A parametric surface (s, theta) -> R^3.
///
/// Charts are immutable values; copies share the underlying maps. The unit
/// normal is (X_s x X_theta)/|X_s x X_theta|, negated when `normal_flipped()`.
class SurfaceChart {
 public:
  using PointMap = std::function<Vec3(double, double)>;
  using TangentMap = std::function<TangentJet(double, double)>;
  using JetMap = std::function<ChartJet(double, double)>;

  static SurfaceChart from_points(PointMap point, ChartDomain domain);
  static SurfaceChart from_tangents(TangentMap tangents, ChartDomain domain);
  static SurfaceChart from_jet(JetMap jet, ChartDomain domain);

  [[nodiscard]] Vec3 point(double s, double theta) const;
  [[nodiscard]] TangentJet tangents(double s, double theta) const;
  /// Throws NonFiniteDerivative when a stencil value is not finite.
  [[nodiscard]] ChartJet jet(double s, double theta) const;

  [[nodiscard]] const ChartDomain& domain() const noexcept { return domain_; }
  [[nodiscard]] DerivativeSource source() const noexcept { return source_; }
  [[nodiscard]] bool normal_flipped() const noexcept { return flipped_; }
  /// Characteristic length; the regularity threshold scales with its square.
  [[nodiscard]] double scale() const noexcept { return scale_; }
  [[nodiscard]] const FiniteDifferenceSteps& steps() const noexcept { return steps_; }

  [[nodiscard]] SurfaceChart flipped(bool flip = true) const;
  [[nodiscard]] SurfaceChart with_scale(double scale) const;
  [[nodiscard]] SurfaceChart with_steps(FiniteDifferenceSteps steps) const;
  [[nodiscard]] SurfaceChart with_domain(ChartDomain domain) const;
  /// Same surface with every derivative synthesized by finite differences.
  [[nodiscard]] SurfaceChart finite_difference_view() const;

 private:
  SurfaceChart() = default;

  [[nodiscard]] ChartJet jet_from_points(double s, double theta) const;
  [[nodiscard]] ChartJet jet_from_tangents(double s, double theta) const;

  PointMap point_;
  TangentMap tangents_;
  JetMap jet_;
  ChartDomain domain_;
  DerivativeSource source_ = DerivativeSource::FiniteDifference;
  FiniteDifferenceSteps steps_;
  double scale_ = 1.0;
  bool flipped_ = false;
};

}  // namespace kalpha
