#pragma once

// Finite-difference stencils shared by surface charts and spine curves.
//
// Functions are sampled along one variable on an interval [lo, hi]. Centered
// stencils are used when they fit inside the interval (or always, for
// periodic variables); otherwise a one-sided stencil is used.

#include <type_traits>

namespace kalpha::fd {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool periodic = false;

  [[nodiscard]] double width() const noexcept { return hi - lo; }
  [[nodiscard]] bool fits(double x, double reach) const noexcept {
    if (periodic) return true;
    const double slack = 1e-12 * (hi - lo);
    return x - reach >= lo - slack && x + reach <= hi + slack;
  }
  /// +1 when there is room to the right of x for `reach`, -1 otherwise.
  [[nodiscard]] int open_side(double x, double reach) const noexcept {
    return (x + reach <= hi) ? 1 : -1;
  }
};

template <class F>
using value_t = std::decay_t<std::invoke_result_t<F, double>>;

/// First derivative: 4th-order centered, 4th-order one-sided near the edges.
template <class F>
value_t<F> first(F&& f, double x, double h, const Interval& iv) {
  using R = value_t<F>;
  if (iv.fits(x, 2 * h)) {
    const R fm2 = f(x - 2 * h), fm1 = f(x - h), fp1 = f(x + h), fp2 = f(x + 2 * h);
    return R((fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h));
  }
  const double d = iv.open_side(x, 4 * h) * h;
  const R f0 = f(x), f1 = f(x + d), f2 = f(x + 2 * d), f3 = f(x + 3 * d), f4 = f(x + 4 * d);
  return R((-25.0 * f0 + 48.0 * f1 - 36.0 * f2 + 16.0 * f3 - 3.0 * f4) / (12.0 * d));
}

/// Second derivative: 2nd-order centered, 2nd-order one-sided near the edges.
template <class F>
value_t<F> second(F&& f, double x, double h, const Interval& iv) {
  using R = value_t<F>;
  if (iv.fits(x, h)) {
    const R fm = f(x - h), f0 = f(x), fp = f(x + h);
    return R((fp - 2.0 * f0 + fm) / (h * h));
  }
  const double d = iv.open_side(x, 3 * h) * h;
  const R f0 = f(x), f1 = f(x + d), f2 = f(x + 2 * d), f3 = f(x + 3 * d);
  return R((2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3) / (d * d));
}

/// Second derivative, 4th-order centered (interior use only).
template <class F>
value_t<F> second_4th(F&& f, double x, double h) {
  using R = value_t<F>;
  const R fm2 = f(x - 2 * h), fm1 = f(x - h), f0 = f(x), fp1 = f(x + h), fp2 = f(x + 2 * h);
  return R((-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h));
}

/// Third derivative, 4th-order centered (interior use only).
template <class F>
value_t<F> third_4th(F&& f, double x, double h) {
  using R = value_t<F>;
  const R fm3 = f(x - 3 * h), fm2 = f(x - 2 * h), fm1 = f(x - h);
  const R fp1 = f(x + h), fp2 = f(x + 2 * h), fp3 = f(x + 3 * h);
  return R((fm3 - 8.0 * fm2 + 13.0 * fm1 - 13.0 * fp1 + 8.0 * fp2 - fp3) / (8.0 * h * h * h));
}

}  // namespace kalpha::fd
