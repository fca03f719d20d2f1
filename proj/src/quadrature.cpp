#include "kalpha/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <numbers>

#include "kalpha/error.hpp"

namespace kalpha {

namespace {

std::string r_text(double r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", r);
  return buf;
}

struct Integrand {
  double h = 0;   // ds/dr
  double dh = 0;  // d2s/dr2
};

Integrand evaluate(const QuadratureParams& p, double r) {
  const double sg = p.branch >= 0 ? 1.0 : -1.0;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  switch (p.family) {
    case QuadratureFamily::Alpha1: {
      const double q = r * r * r * r + p.c1 * r * r + 1;
      if (q < 0) return {nan, nan};
      const double sq = std::sqrt(q);
      const double d = -1 + sg * sq;
      const double dd = sg * (4 * r * r * r + 2 * p.c1 * r) / (2 * sq);
      return {r * r / d, (2 * r * d - r * r * dd) / (d * d)};
    }
    case QuadratureFamily::Alpha12A:
    case QuadratureFamily::Alpha12B: {
      const bool a_form = p.family == QuadratureFamily::Alpha12A;
      const double q = r * r * r * r - 2 * r * r + p.c1;
      if (q < 0) return {nan, nan};
      const double sq = std::sqrt(q);
      const double dsq = (4 * r * r * r - 4 * r) / (2 * sq);
      const double g = a_form ? r * r - sq : sq + r * r;
      const double dg = a_form ? 2 * r - dsq : dsq + 2 * r;
      if (g < 0) return {nan, nan};
      return {sg / std::sqrt(g), -0.5 * sg * dg / (g * std::sqrt(g))};
    }
    case QuadratureFamily::WeingartenWC1:
    case QuadratureFamily::WeingartenWC2: {
      // q = num / (num + shift)
      double num, dnum, shift;
      if (p.family == QuadratureFamily::WeingartenWC1) {
        num = r + p.c;
        dnum = 1;
        shift = p.c1;
      } else {
        num = r * r + p.b * r - p.a;
        dnum = 2 * r + p.b;
        shift = -p.c1;
      }
      const double den = num + shift;
      const double q = num / den;
      if (!(q >= 0)) return {nan, nan};
      const double dq = shift * dnum / (den * den);
      const double sq = std::sqrt(q);
      return {sg * sq, sg * dq / (2 * sq)};
    }
  }
  return {nan, nan};
}

}  // namespace

std::string to_string(QuadratureFamily family) {
  switch (family) {
    case QuadratureFamily::Alpha1: return "alpha1";
    case QuadratureFamily::Alpha12A: return "alpha12-a";
    case QuadratureFamily::Alpha12B: return "alpha12-b";
    case QuadratureFamily::WeingartenWC1: return "weingarten-WC1";
    case QuadratureFamily::WeingartenWC2: return "weingarten-WC2";
  }
  return "unknown";
}

QuadratureFamily parse_family(const std::string& name) {
  for (auto f : {QuadratureFamily::Alpha1, QuadratureFamily::Alpha12A, QuadratureFamily::Alpha12B,
                 QuadratureFamily::WeingartenWC1, QuadratureFamily::WeingartenWC2}) {
    if (to_string(f) == name) return f;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown quadrature family '" + name + "'");
}

QuadratureSolution::QuadratureSolution(QuadratureParams params) : params_(std::move(params)) {
  const auto& p = params_;
  if (!(p.r_min > 0) || !(p.r_max > p.r_min)) {
    throw Error(ErrorCode::InvalidArgument, "r-range must satisfy 0 < r_min < r_max");
  }
  if (p.table_size < 2) throw Error(ErrorCode::InvalidArgument, "table needs at least 2 nodes");
  if (p.branch != 1 && p.branch != -1) throw Error(ErrorCode::InvalidArgument, "branch must be +1 or -1");

  const int n = p.table_size;
  r_.resize(n);
  for (int k = 0; k < n; ++k) r_[k] = p.r_min + (p.r_max - p.r_min) * k / (n - 1);
  r_.back() = p.r_max;

  // Domain and sign survey on nodes and panel midpoints.
  int sign = 0;
  for (int k = 0; k < 2 * n - 1; ++k) {
    const double r = k % 2 == 0 ? r_[k / 2] : 0.5 * (r_[k / 2] + r_[k / 2 + 1]);
    const double h = evaluate(p, r).h;
    if (!std::isfinite(h)) {
      throw Error(ErrorCode::IntegrandDomainError,
                  "integrand not real and finite at r = " + r_text(r));
    }
    const int sk = h > 0 ? 1 : (h < 0 ? -1 : 0);
    if (sk == 0 || (sign != 0 && sk != sign)) {
      throw Error(ErrorCode::NonMonotone, "ds/dr changes sign near r = " + r_text(r));
    }
    sign = sk;
  }
  increasing_ = sign > 0;

  s_.assign(n, 0.0);
  for (int k = 1; k < n; ++k) s_[k] = s_[k - 1] + integrate(r_[k - 1], r_[k]);
  for (int k = 1; k < n; ++k) {
    if (increasing_ ? !(s_[k] > s_[k - 1]) : !(s_[k] < s_[k - 1])) {
      throw Error(ErrorCode::NonMonotone, "s(r) not strictly monotone near r = " + r_text(r_[k]));
    }
  }

  double shift;
  if (p.c2) {
    const double anchor = p.r_anchor.value_or(p.r_min);
    shift = *p.c2 - integrate(p.r_min, anchor);
  } else {
    shift = -std::min(s_.front(), s_.back());
  }
  for (double& s : s_) s += shift;
  s_lo_ = std::min(s_.front(), s_.back());
  s_hi_ = std::max(s_.front(), s_.back());
}

double QuadratureSolution::integrate(double r0, double r1) const {
  if (r0 == r1) return 0.0;
  auto f = [this](double r) { return evaluate(params_, r).h; };
  // Sub-panel pieces are smooth and short enough for a single Gauss-Kronrod pass.
  const double panel = (params_.r_max - params_.r_min) / (params_.table_size - 1);
  const unsigned depth = std::abs(r1 - r0) <= 1.000001 * panel ? 0 : 15;
  double error = 0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, r0, r1, depth,
                                                                                  1e-10, &error);
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::IntegrandDomainError, "quadrature diverged on [" + r_text(r0) + ", " +
                                                     r_text(r1) + "]");
  }
  return v;
}

std::optional<double> QuadratureSolution::alpha() const {
  switch (params_.family) {
    case QuadratureFamily::Alpha1: return 1.0;
    case QuadratureFamily::Alpha12A:
    case QuadratureFamily::Alpha12B: return -0.5;
    default: return std::nullopt;
  }
}

double QuadratureSolution::ds_dr(double r) const { return evaluate(params_, r).h; }
double QuadratureSolution::d2s_dr2(double r) const { return evaluate(params_, r).dh; }

double QuadratureSolution::s_of_r(double r) const {
  if (r < params_.r_min || r > params_.r_max) {
    throw Error(ErrorCode::InvalidArgument, "r = " + r_text(r) + " outside the tabulated range");
  }
  const auto it = std::upper_bound(r_.begin(), r_.end(), r);
  const std::size_t k = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - r_.begin() - 1, 0),
                                              r_.size() - 2);
  return s_[k] + integrate(r_[k], r);
}

double QuadratureSolution::r_of_s(double s) const {
  const double slack = 1e-12 * (1 + std::abs(s_hi_ - s_lo_));
  if (s < s_lo_ - slack || s > s_hi_ + slack) {
    throw Error(ErrorCode::InvalidArgument, "s = " + r_text(s) + " outside [" + r_text(s_lo_) +
                                                ", " + r_text(s_hi_) + "]");
  }
  s = std::clamp(s, s_lo_, s_hi_);
  // Bisection on the monotone table.
  std::size_t lo = 0, hi = s_.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if ((s_[mid] <= s) == increasing_) lo = mid; else hi = mid;
  }
  double a = r_[lo], b = r_[hi];
  double r = a + (b - a) * (s - s_[lo]) / (s_[hi] - s_[lo]);
  // Safeguarded Newton on s_lo + integral - s.
  for (int iter = 0; iter < 20; ++iter) {
    const double g = s_[lo] + integrate(r_[lo], r) - s;
    if (g == 0) break;
    if ((g > 0) == increasing_) b = r; else a = r;
    double next = r - g / ds_dr(r);
    if (std::abs(next - r) <= 4 * std::numeric_limits<double>::epsilon() * r) {
      r = next;
      break;
    }
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    r = next;
  }
  return r;
}

RadiusValue QuadratureSolution::at_radius(double r) const {
  const Integrand i = evaluate(params_, r);
  return {r, 1.0 / i.h, -i.dh / (i.h * i.h * i.h)};
}

RadiusValue QuadratureSolution::at(double s) const { return at_radius(r_of_s(s)); }

RadiusProfile QuadratureSolution::profile() const {
  auto self = std::make_shared<const QuadratureSolution>(*this);
  return {[self](double s) { return self->at(s); }, s_lo_, s_hi_, RadiusRepresentation::Implicit};
}

QuadratureSolution quadrature_radius(const QuadratureParams& params) {
  return QuadratureSolution(params);
}

QuadratureSolution weingarten_radius(const QuadratureParams& params) {
  if (params.family != QuadratureFamily::WeingartenWC1 &&
      params.family != QuadratureFamily::WeingartenWC2) {
    throw Error(ErrorCode::InvalidArgument, "weingarten_radius needs a Weingarten family");
  }
  if (params.family == QuadratureFamily::WeingartenWC2 && params.a == 0 && params.b == 0) {
    throw Error(ErrorCode::DegenerateCoefficients, "a K + b H = 1 needs (a, b) != (0, 0)");
  }
  return QuadratureSolution(params);
}

double radius1_s(double r, double c2) {
  return r - std::numbers::sqrt2 * std::atanh(r / std::numbers::sqrt2) + c2;
}

double radius2_s(double r, double c2, int sign) {
  return (sign >= 0 ? 1.0 : -1.0) * std::log(r + std::sqrt(r * r - 0.5)) / std::numbers::sqrt2 + c2;
}

RadiusProfile radius2_profile(double s0, double s_begin, double s_end) {
  auto map = [s0](double s) {
    const double u = std::numbers::sqrt2 * (s - s0);
    const double r = std::cosh(u) / std::numbers::sqrt2;
    return RadiusValue{r, std::sinh(u), 2 * r};
  };
  return {map, s_begin, s_end, RadiusRepresentation::ClosedForm};
}

}  // namespace kalpha
