#include "kalpha/spine.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "kalpha/error.hpp"
#include "kalpha/finite_difference.hpp"

namespace kalpha {

SpineCurve::SpineCurve(FrameMap frame, double length, SpineKind kind, bool straight)
    : frame_(std::move(frame)), length_(length), kind_(kind), straight_(straight) {
  if (!(length > 0.0)) throw Error(ErrorCode::InvalidArgument, "spine length must be positive");
}

namespace {

SpineCurve make_line(const LineSpec& spec) {
  const double tol = 1e-10;
  const bool orthonormal = std::abs(spec.T.norm() - 1) < tol && std::abs(spec.N.norm() - 1) < tol &&
                           std::abs(spec.B.norm() - 1) < tol && std::abs(spec.T.dot(spec.N)) < tol &&
                           std::abs(spec.T.dot(spec.B)) < tol && std::abs(spec.N.dot(spec.B)) < tol;
  if (!orthonormal || (spec.T.cross(spec.N) - spec.B).norm() > tol) {
    throw Error(ErrorCode::InvalidArgument, "line frame must be a right-handed orthonormal triple");
  }
  auto frame = [spec](double s) {
    return SpineFrame{spec.origin + s * spec.T, spec.T, spec.N, spec.B, 0.0, 0.0};
  };
  return {frame, spec.length, SpineKind::Line, true};
}

SpineCurve make_helix(double a, double b, double length, SpineKind kind) {
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "helix radius must be positive");
  const double w = std::hypot(a, b);
  const double kappa = a / (w * w), tau = b / (w * w);
  auto frame = [a, b, w, kappa, tau](double s) {
    const double u = s / w, cu = std::cos(u), su = std::sin(u);
    SpineFrame f;
    f.point = Vec3(a * cu, a * su, b * u);
    f.T = Vec3(-a * su, a * cu, b) / w;
    f.N = Vec3(-cu, -su, 0.0);
    f.B = Vec3(b * su, -b * cu, a) / w;
    f.curvature = kappa;
    f.torsion = tau;
    return f;
  };
  return {frame, length, kind, false};
}

// Arc-length reparametrization of a general curve plus its finite-difference Frenet frame.
class GeneralCurve {
 public:
  explicit GeneralCurve(CurveSpec spec) : spec_(std::move(spec)) {
    if (!spec_.gamma || !(spec_.t_max > spec_.t_min)) {
      throw Error(ErrorCode::InvalidArgument, "curve needs a map and t_max > t_min");
    }
    const double span = spec_.t_max - spec_.t_min;
    h1_ = 2e-4 * span;
    h2_ = 1e-3 * span;
    h3_ = 2e-3 * span;
    const int panels = 256;
    knots_.resize(panels + 1);
    cumulative_.assign(panels + 1, 0.0);
    for (int k = 0; k <= panels; ++k) knots_[k] = spec_.t_min + span * k / panels;
    for (int k = 0; k < panels; ++k) {
      cumulative_[k + 1] = cumulative_[k] + arc(knots_[k], knots_[k + 1]);
    }
  }

  [[nodiscard]] double length() const { return cumulative_.back(); }

  [[nodiscard]] double speed(double t) const { return d1(t).norm(); }

  [[nodiscard]] double t_of_s(double s) const {
    s = std::clamp(s, 0.0, length());
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    const std::size_t k = std::min<std::size_t>(
        std::max<std::ptrdiff_t>(it - cumulative_.begin() - 1, 0), knots_.size() - 2);
    double lo = knots_[k], hi = knots_[k + 1];
    double t = lo + (hi - lo) * (s - cumulative_[k]) / (cumulative_[k + 1] - cumulative_[k]);
    for (int iter = 0; iter < 30; ++iter) {
      const double g = cumulative_[k] + arc(knots_[k], t) - s;
      if (g > 0) hi = t; else lo = t;
      double next = t - g / speed(t);
      if (std::abs(next - t) <= 1e-15 * (spec_.t_max - spec_.t_min)) {
        t = next;
        break;
      }
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      t = next;
    }
    return t;
  }

  [[nodiscard]] SpineFrame frame(double s) const {
    const double t = t_of_s(s);
    const Vec3 g1 = d1(t);
    const Vec3 g2 = fd::second_4th(spec_.gamma, t, h2_);
    const Vec3 g3 = fd::third_4th(spec_.gamma, t, h3_);
    const Vec3 cr = g1.cross(g2);
    const double speed = g1.norm(), crn = cr.norm();
    if (crn < 1e-10 * speed * speed * speed) {
      throw Error(ErrorCode::ZeroCurvature, "principal normal undefined at s = " + std::to_string(s));
    }
    SpineFrame f;
    f.point = spec_.gamma(t);
    f.T = g1 / speed;
    f.B = cr / crn;
    f.N = f.B.cross(f.T);
    f.curvature = crn / (speed * speed * speed);
    f.torsion = cr.dot(g3) / (crn * crn);
    return f;
  }

 private:
  [[nodiscard]] Vec3 d1(double t) const {
    const fd::Interval everywhere{spec_.t_min, spec_.t_max, true};
    return fd::first(spec_.gamma, t, h1_, everywhere);
  }

  [[nodiscard]] double arc(double a, double b) const {
    return boost::math::quadrature::gauss<double, 20>::integrate(
        [this](double t) { return speed(t); }, a, b);
  }

  CurveSpec spec_;
  double h1_ = 0, h2_ = 0, h3_ = 0;
  std::vector<double> knots_;
  std::vector<double> cumulative_;
};

SpineCurve make_general(const CurveSpec& spec) {
  auto curve = std::make_shared<const GeneralCurve>(spec);
  const double length = curve->length();
  for (int k = 0; k <= 256; ++k) (void)curve->frame(length * k / 256);
  return {[curve](double s) { return curve->frame(s); }, length, SpineKind::General, false};
}

}  // namespace

SpineCurve make_spine(const SpineSpec& spec) {
  struct Visitor {
    SpineCurve operator()(const LineSpec& l) const { return make_line(l); }
    SpineCurve operator()(const HelixSpec& h) const {
      return make_helix(h.a, h.b, h.length, SpineKind::Helix);
    }
    SpineCurve operator()(const CircleSpec& c) const {
      return make_helix(c.radius, 0.0, c.length, SpineKind::Circle);
    }
    SpineCurve operator()(const CurveSpec& c) const { return make_general(c); }
  };
  return std::visit(Visitor{}, spec);
}

}  // namespace kalpha
