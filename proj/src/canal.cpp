#include "kalpha/canal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kalpha/error.hpp"

namespace kalpha {

namespace {

constexpr int kProbeCount = 513;
constexpr double kStraightTolerance = 1e-12;
constexpr double kParabolicTolerance = 1e-12;

struct LocalGeometry {
  SpineFrame frame;
  RadiusValue radius;
  double cos_phi = 0, sin_phi = 0;
};

LocalGeometry local(const SpineCurve& spine, const RadiusProfile& radius, double s) {
  LocalGeometry g;
  g.frame = spine.frame(s);
  g.radius = radius.at(s);
  g.cos_phi = -g.radius.dr;
  g.sin_phi = std::sqrt(std::max(0.0, 1.0 - g.radius.dr * g.radius.dr));
  return g;
}

TangentJet canal_tangents(const SpineCurve& spine, const RadiusProfile& radius, double s,
                          double theta) {
  const LocalGeometry g = local(spine, radius, s);
  const SpineFrame& f = g.frame;
  const double r = g.radius.r, dr = g.radius.dr, d2r = g.radius.d2r;
  const double ct = std::cos(theta), st = std::sin(theta);
  const double kappa = f.curvature, tau = f.torsion;

  const Vec3 ring = ct * f.N + st * f.B;
  const Vec3 U = g.cos_phi * f.T + g.sin_phi * ring;
  const double dcos = -d2r;
  const double dsin = -dr * d2r / g.sin_phi;
  const Vec3 dU = dcos * f.T + g.cos_phi * kappa * f.N + dsin * ring +
                  g.sin_phi * (ct * (-kappa * f.T + tau * f.B) - st * tau * f.N);

  TangentJet j;
  j.x = f.point + r * U;
  j.xs = f.T + dr * U + r * dU;
  j.xt = r * g.sin_phi * (-st * f.N + ct * f.B);
  return j;
}

}  // namespace

CanalSurface build_canal(const SpineCurve& spine, const RadiusProfile& radius_in) {
  double s0 = radius_in.s_begin(), s1 = radius_in.s_end();
  if (!spine.straight()) {
    s0 = std::max(s0, 0.0);
    s1 = std::min(s1, spine.length());
    if (!(s1 > s0)) {
      throw Error(ErrorCode::InvalidArgument, "spine and radius intervals do not overlap");
    }
  }
  const RadiusProfile radius = radius_in.restricted(s0, s1);

  double max_kappa = 0, max_slope = 0, max_d2 = 0, r_mid = 0;
  for (int k = 0; k < kProbeCount; ++k) {
    const double s = s0 + (s1 - s0) * k / (kProbeCount - 1);
    const RadiusValue v = radius.at(s);
    if (!(v.r > 0.0)) {
      throw Error(ErrorCode::InvalidRadius, "r = " + std::to_string(v.r) + " at s = " + std::to_string(s));
    }
    if (!(1.0 - v.dr * v.dr > 0.0)) {
      throw Error(ErrorCode::InvalidRadius, "|r'| = " + std::to_string(std::abs(v.dr)) +
                                                " >= 1 at s = " + std::to_string(s));
    }
    max_slope = std::max(max_slope, std::abs(v.dr));
    max_d2 = std::max(max_d2, std::abs(v.d2r));
    max_kappa = std::max(max_kappa, std::abs(spine.frame(s).curvature));
    if (k == kProbeCount / 2) r_mid = v.r;
  }

  const bool revolution = spine.straight() || max_kappa <= kStraightTolerance;
  const bool tube = radius.is_constant() || (max_slope == 0.0 && max_d2 == 0.0);
  CanalKind kind = CanalKind::Canal;
  if (revolution && tube) kind = CanalKind::Cylinder;
  else if (revolution) kind = CanalKind::Revolution;
  else if (tube) kind = CanalKind::Tube;

  ChartDomain domain{s0, s1, 0.0, 2 * std::numbers::pi, true};
  SurfaceChart chart = SurfaceChart::from_tangents(
      [spine, radius](double s, double t) { return canal_tangents(spine, radius, s, t); }, domain);
  chart = chart.with_scale(r_mid);

  CanalSurface out{spine, radius, chart, kind};
  // Align the cross-product normal with the sphere-radial normal.
  const double s_ref = 0.5 * (s0 + s1);
  const TangentJet ref = canal_tangents(spine, radius, s_ref, 0.0);
  if (ref.xs.cross(ref.xt).dot(canal_normal(out, s_ref, 0.0)) < 0) out.chart = chart.flipped();
  return out;
}

CanalSurface surface_of_revolution(const RadiusProfile& radius) {
  return build_canal(make_spine(LineSpec{}), radius);
}

Vec3 canal_normal(const CanalSurface& surface, double s, double theta) {
  const LocalGeometry g = local(surface.spine, surface.radius, s);
  return g.cos_phi * g.frame.T +
         g.sin_phi * (std::cos(theta) * g.frame.N + std::sin(theta) * g.frame.B);
}

CanalCurvatures canal_curvatures(const CanalSurface& surface, double s, double theta) {
  const LocalGeometry g = local(surface.spine, surface.radius, s);
  const double r = g.radius.r;
  const double sin2 = g.sin_phi * g.sin_phi;
  const double bend = g.frame.curvature * g.sin_phi * std::cos(theta);
  CanalCurvatures c;
  c.P = r * g.radius.d2r + r * bend - sin2;
  c.Q = g.radius.d2r + bend;
  if (std::abs(c.P) < kParabolicTolerance) {
    c.parabolic = true;
    c.K = c.H = std::numeric_limits<double>::quiet_NaN();
    return c;
  }
  c.K = c.Q / (r * c.P);
  c.H = -(2 * c.P + sin2) / (2 * r * c.P);
  return c;
}

double linear_identity_residual(double K, double H, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  return H + 0.5 * (K * r + 1.0 / r);
}

}  // namespace kalpha
