#include "kalpha/surface_chart.hpp"

#include <cmath>

#include "kalpha/error.hpp"

namespace kalpha {

namespace {

bool finite(const Vec3& v) { return v.allFinite(); }

void require_finite(const ChartJet& j, double s, double theta) {
  if (!(finite(j.x) && finite(j.xs) && finite(j.xt) && finite(j.xss) && finite(j.xst) &&
        finite(j.xtt))) {
    throw Error(ErrorCode::NonFiniteDerivative,
                "non-finite chart derivative at (" + std::to_string(s) + ", " +
                    std::to_string(theta) + ")");
  }
}

}  // namespace

bool ChartDomain::contains(double s, double theta) const {
  const double ts = 1e-12 * (s_max - s_min);
  const double tt = 1e-12 * (theta_max - theta_min);
  const bool s_ok = s >= s_min - ts && s <= s_max + ts;
  const bool t_ok = periodic_theta || (theta >= theta_min - tt && theta <= theta_max + tt);
  return s_ok && t_ok;
}

SurfaceChart SurfaceChart::from_points(PointMap point, ChartDomain domain) {
  SurfaceChart c;
  c.point_ = std::move(point);
  c.domain_ = domain;
  c.source_ = DerivativeSource::FiniteDifference;
  return c;
}

SurfaceChart SurfaceChart::from_tangents(TangentMap tangents, ChartDomain domain) {
  SurfaceChart c;
  c.point_ = [tangents](double s, double t) { return tangents(s, t).x; };
  c.tangents_ = std::move(tangents);
  c.domain_ = domain;
  c.source_ = DerivativeSource::AnalyticTangents;
  return c;
}

SurfaceChart SurfaceChart::from_jet(JetMap jet, ChartDomain domain) {
  SurfaceChart c;
  c.point_ = [jet](double s, double t) { return jet(s, t).x; };
  c.tangents_ = [jet](double s, double t) {
    const ChartJet j = jet(s, t);
    return TangentJet{j.x, j.xs, j.xt};
  };
  c.jet_ = std::move(jet);
  c.domain_ = domain;
  c.source_ = DerivativeSource::Analytic;
  return c;
}

Vec3 SurfaceChart::point(double s, double theta) const { return point_(s, theta); }

TangentJet SurfaceChart::tangents(double s, double theta) const {
  if (source_ != DerivativeSource::FiniteDifference) return tangents_(s, theta);
  const ChartJet j = jet_from_points(s, theta);
  return {j.x, j.xs, j.xt};
}

ChartJet SurfaceChart::jet(double s, double theta) const {
  ChartJet j;
  switch (source_) {
    case DerivativeSource::Analytic: j = jet_(s, theta); break;
    case DerivativeSource::AnalyticTangents: j = jet_from_tangents(s, theta); break;
    case DerivativeSource::FiniteDifference: j = jet_from_points(s, theta); break;
  }
  require_finite(j, s, theta);
  return j;
}

ChartJet SurfaceChart::jet_from_points(double s, double theta) const {
  const fd::Interval is = domain_.s_interval();
  const fd::Interval it = domain_.theta_interval();
  const double h1s = steps_.first * is.width(), h1t = steps_.first * it.width();
  const double h2s = steps_.second * is.width(), h2t = steps_.second * it.width();

  auto along_s = [&](double t) { return [this, t](double x) -> Vec3 { return point_(x, t); }; };
  auto along_t = [&](double u) { return [this, u](double y) -> Vec3 { return point_(u, y); }; };

  ChartJet j;
  j.x = point_(s, theta);
  j.xs = fd::first(along_s(theta), s, h1s, is);
  j.xt = fd::first(along_t(s), theta, h1t, it);
  j.xss = fd::second(along_s(theta), s, h2s, is);
  j.xtt = fd::second(along_t(s), theta, h2t, it);
  // Mixed partial: 2nd-order difference in theta of 2nd-order differences in s.
  auto ds_at = [&](double y) -> Vec3 {
    auto g = [this, y](double x) -> Vec3 { return point_(x, y); };
    if (is.fits(s, h2s)) return (g(s + h2s) - g(s - h2s)) / (2 * h2s);
    const double d = is.open_side(s, 2 * h2s) * h2s;
    return (-3.0 * g(s) + 4.0 * g(s + d) - g(s + 2 * d)) / (2 * d);
  };
  if (it.fits(theta, h2t)) {
    j.xst = (ds_at(theta + h2t) - ds_at(theta - h2t)) / (2 * h2t);
  } else {
    const double d = it.open_side(theta, 2 * h2t) * h2t;
    j.xst = (-3.0 * ds_at(theta) + 4.0 * ds_at(theta + d) - ds_at(theta + 2 * d)) / (2 * d);
  }
  return j;
}

ChartJet SurfaceChart::jet_from_tangents(double s, double theta) const {
  const fd::Interval is = domain_.s_interval();
  const fd::Interval it = domain_.theta_interval();
  const double hs = steps_.first * is.width(), ht = steps_.first * it.width();

  const TangentJet t0 = tangents_(s, theta);
  ChartJet j;
  j.x = t0.x;
  j.xs = t0.xs;
  j.xt = t0.xt;
  j.xss = fd::first([&](double x) -> Vec3 { return tangents_(x, theta).xs; }, s, hs, is);
  j.xtt = fd::first([&](double y) -> Vec3 { return tangents_(s, y).xt; }, theta, ht, it);
  const Vec3 dt_xs = fd::first([&](double y) -> Vec3 { return tangents_(s, y).xs; }, theta, ht, it);
  const Vec3 ds_xt = fd::first([&](double x) -> Vec3 { return tangents_(x, theta).xt; }, s, hs, is);
  j.xst = 0.5 * (dt_xs + ds_xt);
  return j;
}

SurfaceChart SurfaceChart::flipped(bool flip) const {
  SurfaceChart c = *this;
  c.flipped_ = flip ? !flipped_ : flipped_;
  return c;
}

SurfaceChart SurfaceChart::with_scale(double scale) const {
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "chart scale must be positive");
  SurfaceChart c = *this;
  c.scale_ = scale;
  return c;
}

SurfaceChart SurfaceChart::with_steps(FiniteDifferenceSteps steps) const {
  if (!(steps.first > 0.0 && steps.second > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "finite-difference steps must be positive");
  }
  SurfaceChart c = *this;
  c.steps_ = steps;
  return c;
}

SurfaceChart SurfaceChart::with_domain(ChartDomain domain) const {
  SurfaceChart c = *this;
  c.domain_ = domain;
  return c;
}

SurfaceChart SurfaceChart::finite_difference_view() const {
  SurfaceChart c = *this;
  c.source_ = DerivativeSource::FiniteDifference;
  c.tangents_ = nullptr;
  c.jet_ = nullptr;
  return c;
}

}  // namespace kalpha
