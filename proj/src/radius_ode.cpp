#include "kalpha/radius_ode.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>

#include "kalpha/error.hpp"

namespace kalpha {

namespace odeint = boost::numeric::odeint;

std::string to_string(OdeStop stop) {
  switch (stop) {
    case OdeStop::ReachedEnd: return "reached-end";
    case OdeStop::SlopeLimit: return "slope-limit";
    case OdeStop::RadiusZero: return "radius-zero";
    case OdeStop::BranchLost: return "branch-lost";
  }
  return "unknown";
}

std::optional<double> curvature_from_slope(double alpha, double dr, double previous_K) {
  if (alpha == 0) throw Error(ErrorCode::InvalidArgument, "alpha must be nonzero");
  const double x = -dr;
  if (x == 0) {
    if (alpha > 0) return 0.0;
    return std::nullopt;
  }
  const double inv = 1.0 / alpha;
  const bool integer = alpha == std::round(alpha);
  if (integer && std::fmod(std::abs(alpha), 2.0) == 1.0) {
    return std::copysign(std::pow(std::abs(x), inv), x);
  }
  if (x < 0) return std::nullopt;
  const double K = std::pow(x, inv);
  if (integer && previous_K < 0) return -K;
  return K;
}

std::optional<double> radius_second_derivative(double alpha, double r, double dr, double previous_K) {
  const auto K = curvature_from_slope(alpha, dr, previous_K);
  if (!K || !std::isfinite(*K)) return std::nullopt;
  const double denom = *K * r * r - 1;
  if (denom == 0) return std::nullopt;
  const double d2r = *K * r * (1 - dr * dr) / denom;
  if (!std::isfinite(d2r)) return std::nullopt;
  return d2r;
}

namespace {

using State = std::array<double, 2>;

struct Rhs {
  double alpha;
  double margin;
  double previous_K = 1.0;
  mutable bool bad = false;
  mutable OdeStop reason = OdeStop::BranchLost;

  void operator()(const State& y, State& dy, double) const {
    dy = {0.0, 0.0};
    if (!(y[0] > 0)) {
      bad = true;
      reason = OdeStop::RadiusZero;
      return;
    }
    if (!(1 - y[1] * y[1] >= margin)) {
      bad = true;
      reason = OdeStop::SlopeLimit;
      return;
    }
    const auto d2r = radius_second_derivative(alpha, y[0], y[1], previous_K);
    if (!d2r) {
      bad = true;
      reason = OdeStop::BranchLost;
      return;
    }
    dy = {y[1], *d2r};
  }
};

// Quintic Hermite interpolation through (r, r', r'') at accepted steps.
class Trajectory {
 public:
  Trajectory(std::vector<double> s, std::vector<double> r, std::vector<double> dr,
             std::vector<double> d2r, std::vector<double> K, double alpha)
      : s_(std::move(s)), r_(std::move(r)), dr_(std::move(dr)), d2r_(std::move(d2r)),
        K_(std::move(K)), alpha_(alpha) {}

  [[nodiscard]] RadiusValue at(double s) const {
    s = std::clamp(s, s_.front(), s_.back());
    const auto it = std::upper_bound(s_.begin(), s_.end(), s);
    const std::size_t k =
        std::min<std::size_t>(std::max<std::ptrdiff_t>(it - s_.begin() - 1, 0), s_.size() - 2);
    const double h = s_[k + 1] - s_[k];
    const double t = (s - s_[k]) / h;
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5, h5 = 10 * t3 - 15 * t4 + 6 * t5;
    const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5, h4 = -4 * t3 + 7 * t4 - 3 * t5;
    const double h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5), h3 = 0.5 * (t3 - 2 * t4 + t5);
    const double d0 = -30 * t2 + 60 * t3 - 30 * t4, d5 = -d0;
    const double d1 = 1 - 18 * t2 + 32 * t3 - 15 * t4, d4 = -12 * t2 + 28 * t3 - 15 * t4;
    const double d2 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4), d3 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4);

    const double r = h0 * r_[k] + h * h1 * dr_[k] + h * h * h2 * d2r_[k] + h * h * h3 * d2r_[k + 1] +
                     h * h4 * dr_[k + 1] + h5 * r_[k + 1];
    const double dr = (d0 * r_[k] + d5 * r_[k + 1]) / h + d1 * dr_[k] + d4 * dr_[k + 1] +
                      h * (d2 * d2r_[k] + d3 * d2r_[k + 1]);
    const double prev = t < 0.5 ? K_[k] : K_[k + 1];
    const auto d2r = radius_second_derivative(alpha_, r, dr, prev);
    return {r, dr, d2r ? *d2r : (1 - t) * d2r_[k] + t * d2r_[k + 1]};
  }

 private:
  std::vector<double> s_, r_, dr_, d2r_, K_;
  double alpha_;
};

}  // namespace

OdeSolution solve_radius_ode(double alpha, double r0, double dr0, double s0, double s1,
                             const OdeOptions& options) {
  if (alpha == 0) throw Error(ErrorCode::InvalidArgument, "alpha must be nonzero");
  if (!(r0 > 0)) throw Error(ErrorCode::InvalidRadius, "initial radius must be positive");
  if (!(std::abs(dr0) < 1)) throw Error(ErrorCode::InvalidRadius, "initial |r'| must be below 1");
  if (s1 == s0) throw Error(ErrorCode::InvalidArgument, "empty integration range");
  const auto d2r0 = radius_second_derivative(alpha, r0, dr0);
  if (!d2r0) {
    throw Error(ErrorCode::NoRealBranch, "-r' = K^alpha has no admissible real solution at the initial point");
  }

  Rhs rhs{alpha, options.slope_margin};
  rhs.previous_K = *curvature_from_slope(alpha, dr0);
  const double direction = s1 > s0 ? 1.0 : -1.0;

  auto stepper = odeint::make_controlled(options.tolerance, options.tolerance,
                                         odeint::runge_kutta_dopri5<State>());
  State y{r0, dr0};
  double s = s0;
  double dt = direction * std::min(options.initial_step, std::abs(s1 - s0));

  std::vector<double> ss{s0}, rs{r0}, drs{dr0}, d2rs{*d2r0}, Ks{rhs.previous_K};
  OdeSolution out{RadiusProfile::constant(r0, std::min(s0, s1), std::max(s0, s1)),
                  OdeStop::ReachedEnd, s0, {}, {}, {}, {}, 0, 0};

  while (direction * (s1 - s) > 0) {
    const double remaining = std::abs(s1 - s);
    dt = direction * std::min({std::abs(dt), options.max_step, remaining});
    const State y_prev = y;
    const double s_prev = s;
    const double attempted = dt;
    rhs.bad = false;
    const auto result = stepper.try_step(std::cref(rhs), y, s, dt);
    const bool admissible = !rhs.bad;
    if (result == odeint::success && admissible) {
      const auto d2r = radius_second_derivative(alpha, y[0], y[1], rhs.previous_K);
      if (!(y[0] > 0) || !(1 - y[1] * y[1] >= options.slope_margin) || !d2r) {
        rhs.bad = true;
        rhs.reason = !(y[0] > 0) ? OdeStop::RadiusZero
                     : !(1 - y[1] * y[1] >= options.slope_margin) ? OdeStop::SlopeLimit
                                                                  : OdeStop::BranchLost;
      } else {
        if (std::abs(s1 - s) < 1e-14 * (1 + std::abs(s1))) s = s1;
        rhs.previous_K = *curvature_from_slope(alpha, y[1], rhs.previous_K);
        ss.push_back(s);
        rs.push_back(y[0]);
        drs.push_back(y[1]);
        d2rs.push_back(*d2r);
        Ks.push_back(rhs.previous_K);
        ++out.accepted;
        continue;
      }
    }
    ++out.rejected;
    if (rhs.bad) {
      // Inadmissible trial state: shrink towards the domain boundary.
      y = y_prev;
      s = s_prev;
      dt = 0.5 * attempted;
      if (std::abs(dt) < options.min_step) {
        out.stop = rhs.reason;
        break;
      }
    } else if (std::abs(dt) < options.min_step) {
      throw Error(ErrorCode::StiffStop, "step size underflow at s = " + std::to_string(s));
    }
  }

  out.s_stop = ss.back();
  if (ss.size() < 2) {
    throw Error(ErrorCode::StiffStop, "no step accepted from s = " + std::to_string(s0));
  }
  if (direction < 0) {
    for (auto* v : {&ss, &rs, &drs, &d2rs, &Ks}) std::reverse(v->begin(), v->end());
  }
  auto trajectory = std::make_shared<const Trajectory>(ss, rs, drs, d2rs, Ks, alpha);
  out.profile = RadiusProfile([trajectory](double t) { return trajectory->at(t); }, ss.front(),
                              ss.back(), RadiusRepresentation::Tabulated);
  out.s = std::move(ss);
  out.r = std::move(rs);
  out.dr = std::move(drs);
  out.d2r = std::move(d2rs);
  return out;
}

}  // namespace kalpha
