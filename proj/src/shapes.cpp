#include "kalpha/shapes.hpp"

#include <cmath>
#include <numbers>

#include "kalpha/error.hpp"

namespace kalpha::shapes {

namespace {

struct Meridian {
  double rho, drho, d2rho, z, dz, d2z;
};

// (rho cos t, rho sin t, z) with the meridian jet supplied per s.
template <class F>
SurfaceChart revolution(F meridian, ChartDomain domain) {
  auto jet = [meridian](double s, double t) {
    const Meridian m = meridian(s);
    const double ct = std::cos(t), st = std::sin(t);
    ChartJet j;
    j.x = Vec3(m.rho * ct, m.rho * st, m.z);
    j.xs = Vec3(m.drho * ct, m.drho * st, m.dz);
    j.xt = Vec3(-m.rho * st, m.rho * ct, 0.0);
    j.xss = Vec3(m.d2rho * ct, m.d2rho * st, m.d2z);
    j.xst = Vec3(-m.drho * st, m.drho * ct, 0.0);
    j.xtt = Vec3(-m.rho * ct, -m.rho * st, 0.0);
    return j;
  };
  return SurfaceChart::from_jet(jet, domain);
}

}  // namespace

SurfaceChart sphere(double radius, double s_margin) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "sphere radius must be positive");
  const double half = std::numbers::pi / 2 - s_margin;
  ChartDomain domain{-half, half, 0.0, 2 * std::numbers::pi, true};
  auto jet = [radius](double s, double t) {
    const double cs = std::cos(s), ss = std::sin(s), ct = std::cos(t), st = std::sin(t);
    ChartJet j;
    j.x = radius * Vec3(cs * ct, cs * st, ss);
    j.xs = radius * Vec3(-ss * ct, -ss * st, cs);
    j.xt = radius * Vec3(-cs * st, cs * ct, 0.0);
    j.xss = -j.x;
    j.xst = radius * Vec3(ss * st, -ss * ct, 0.0);
    j.xtt = radius * Vec3(-cs * ct, -cs * st, 0.0);
    return j;
  };
  return SurfaceChart::from_jet(jet, domain).with_scale(radius);
}

SurfaceChart plane() {
  ChartDomain domain{-1.0, 1.0, -1.0, 1.0, false};
  auto jet = [](double s, double t) {
    ChartJet j;
    j.x = Vec3(s, t, 0.0);
    j.xs = Vec3::UnitX();
    j.xt = Vec3::UnitY();
    j.xss = j.xst = j.xtt = Vec3::Zero();
    return j;
  };
  return SurfaceChart::from_jet(jet, domain);
}

SurfaceChart cylinder(double radius, double length) {
  ChartDomain domain{0.0, length, 0.0, 2 * std::numbers::pi, true};
  auto jet = [radius](double s, double t) {
    const double ct = std::cos(t), st = std::sin(t);
    ChartJet j;
    j.x = Vec3(radius * ct, radius * st, s);
    j.xs = Vec3::UnitZ();
    j.xt = Vec3(-radius * st, radius * ct, 0.0);
    j.xss = j.xst = Vec3::Zero();
    j.xtt = Vec3(-radius * ct, -radius * st, 0.0);
    return j;
  };
  return SurfaceChart::from_jet(jet, domain).with_scale(radius);
}

SurfaceChart quadric_graph(double a, double b, double c) {
  ChartDomain domain{-1.0, 1.0, -1.0, 1.0, false};
  auto jet = [a, b, c](double s, double t) {
    ChartJet j;
    j.x = Vec3(s, t, a * s * s + b * s * t + c * t * t);
    j.xs = Vec3(1.0, 0.0, 2 * a * s + b * t);
    j.xt = Vec3(0.0, 1.0, b * s + 2 * c * t);
    j.xss = Vec3(0.0, 0.0, 2 * a);
    j.xst = Vec3(0.0, 0.0, b);
    j.xtt = Vec3(0.0, 0.0, 2 * c);
    return j;
  };
  return SurfaceChart::from_jet(jet, domain);
}

SurfaceChart catenoid(double s_min, double s_max) {
  if (!(s_max > s_min)) throw Error(ErrorCode::InvalidArgument, "empty catenoid range");
  auto meridian = [](double s) {
    const double c = std::cosh(s), sh = std::sinh(s);
    return Meridian{c, sh, c, s, 1.0, 0.0};
  };
  return revolution(meridian, {s_min, s_max, 0.0, 2 * std::numbers::pi, true});
}

SurfaceChart pseudosphere(double u_min, double u_max) {
  if (!(u_min > 0) || !(u_max > u_min)) throw Error(ErrorCode::InvalidArgument, "pseudosphere needs 0 < u_min < u_max");
  auto meridian = [](double u) {
    const double sech = 1 / std::cosh(u), th = std::tanh(u);
    return Meridian{sech, -sech * th, sech * th * th - sech * sech * sech,
                    u - th, th * th, 2 * th * sech * sech};
  };
  return revolution(meridian, {u_min, u_max, 0.0, 2 * std::numbers::pi, true});
}

}  // namespace kalpha::shapes
