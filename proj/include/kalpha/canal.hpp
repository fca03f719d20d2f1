#pragma once

#include "kalpha/radius_profile.hpp"
#include "kalpha/spine.hpp"
#include "kalpha/surface_chart.hpp"

namespace kalpha {

enum class CanalKind {
  Canal,
  Tube,        // constant radius
  Revolution,  // straight spine
  Cylinder,    // both
};

/// Envelope of spheres of radius r(s) centred on a spine:
///   X(s, theta) = c + r (sin(phi) cos(theta) N + sin(phi) sin(theta) B + cos(phi) T),
/// with cos(phi) = -r' and sin(phi) = +sqrt(1 - r'^2).
///
/// The chart is oriented so that its normal equals the sphere-radial normal
/// cos(phi) T + sin(phi) cos(theta) N + sin(phi) sin(theta) B.
struct CanalSurface {
  SpineCurve spine;
  RadiusProfile radius;
  SurfaceChart chart;
  CanalKind kind = CanalKind::Canal;

  [[nodiscard]] bool is_tube() const { return kind == CanalKind::Tube || kind == CanalKind::Cylinder; }
  [[nodiscard]] bool is_revolution() const {
    return kind == CanalKind::Revolution || kind == CanalKind::Cylinder;
  }
};

/// Throws InvalidRadius when r <= 0 or |r'| >= 1 somewhere on the validity interval,
/// and InvalidArgument when the spine and radius intervals do not overlap.
CanalSurface build_canal(const SpineCurve& spine, const RadiusProfile& radius);

/// Canal over the z-axis spine with T = (0,0,1), N = (1,0,0), B = (0,1,0):
///   (r sin(phi) cos(theta), r sin(phi) sin(theta), r cos(phi) + s).
CanalSurface surface_of_revolution(const RadiusProfile& radius);

/// The sphere-radial unit normal at (s, theta).
Vec3 canal_normal(const CanalSurface& surface, double s, double theta);

struct CanalCurvatures {
  double K = 0;
  double H = 0;
  double P = 0;  // r r'' + r kappa sin(phi) cos(theta) - sin^2(phi)
  double Q = 0;  // r'' + kappa sin(phi) cos(theta)
  bool parabolic = false;  // |P| < 1e-12; K and H are NaN then
};

/// Closed-form K = Q/(rP) and H = -(2P + sin^2 phi)/(2rP), oriented by canal_normal.
CanalCurvatures canal_curvatures(const CanalSurface& surface, double s, double theta);

/// H + (K r + 1/r)/2, which vanishes on every canal surface.
double linear_identity_residual(double K, double H, double r);

}  // namespace kalpha
