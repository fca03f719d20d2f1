#pragma once

#include <functional>
#include <variant>

#include "kalpha/surface_chart.hpp"

namespace kalpha {

/// Point, Frenet frame, curvature and torsion of an arc-length curve at one s.
struct SpineFrame {
  Vec3 point;
  Vec3 T, N, B;
  double curvature = 0;
  double torsion = 0;
};

enum class SpineKind { Line, Circle, Helix, General };

/// Arc-length parametrized space curve on [0, length] with its Frenet apparatus.
class SpineCurve {
 public:
  using FrameMap = std::function<SpineFrame(double)>;

  SpineCurve(FrameMap frame, double length, SpineKind kind, bool straight);

  [[nodiscard]] SpineFrame frame(double s) const { return frame_(s); }
  [[nodiscard]] Vec3 point(double s) const { return frame_(s).point; }
  [[nodiscard]] double length() const noexcept { return length_; }
  [[nodiscard]] SpineKind kind() const noexcept { return kind_; }
  /// True for lines: kappa vanishes identically and the frame is constant.
  [[nodiscard]] bool straight() const noexcept { return straight_; }

 private:
  FrameMap frame_;
  double length_;
  SpineKind kind_;
  bool straight_;
};

/// c(s) = origin + s T with a user-chosen constant frame.
struct LineSpec {
  double length = 1.0;
  Vec3 origin = Vec3::Zero();
  Vec3 T = Vec3::UnitZ();
  Vec3 N = Vec3::UnitX();
  Vec3 B = Vec3::UnitY();
};

/// (a cos t, a sin t, b t) re-parametrized by arc length; a > 0.
struct HelixSpec {
  double a = 1.0;
  double b = 0.0;
  double length = 1.0;
};

/// Circle of radius R in the xy-plane.
struct CircleSpec {
  double radius = 1.0;
  double length = 1.0;
};

/// Any regular curve gamma(t), t in [t_min, t_max]; arc length is computed numerically
/// and the Frenet apparatus comes from finite differences of gamma.
struct CurveSpec {
  std::function<Vec3(double)> gamma;
  double t_min = 0.0;
  double t_max = 1.0;
};

using SpineSpec = std::variant<LineSpec, HelixSpec, CircleSpec, CurveSpec>;

/// Throws InvalidArgument for a non-orthonormal line frame or bad lengths, and
/// ZeroCurvature when a general curve has a vanishing curvature.
SpineCurve make_spine(const SpineSpec& spec);

}  // namespace kalpha
