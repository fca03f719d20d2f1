#include "kalpha/radius_profile.hpp"

#include <cmath>
#include <string>

#include "kalpha/error.hpp"

namespace kalpha {

RadiusProfile::RadiusProfile(Map map, double s_begin, double s_end,
                             RadiusRepresentation representation, bool constant)
    : map_(std::move(map)),
      s_begin_(s_begin),
      s_end_(s_end),
      representation_(representation),
      constant_(constant) {
  if (!(s_end > s_begin)) {
    throw Error(ErrorCode::InvalidRadius, "empty validity interval [" + std::to_string(s_begin) +
                                              ", " + std::to_string(s_end) + "]");
  }
}

RadiusProfile RadiusProfile::constant(double r0, double s_begin, double s_end) {
  if (!(r0 > 0.0)) throw Error(ErrorCode::InvalidRadius, "radius must be positive");
  return {[r0](double) { return RadiusValue{r0, 0.0, 0.0}; }, s_begin, s_end,
          RadiusRepresentation::ClosedForm, true};
}

RadiusProfile RadiusProfile::restricted(double s_begin, double s_end) const {
  RadiusProfile p = *this;
  p.s_begin_ = s_begin;
  p.s_end_ = s_end;
  if (!(s_end > s_begin)) throw Error(ErrorCode::InvalidRadius, "empty restricted interval");
  return p;
}

RadiusProfile RadiusProfile::trimmed() const {
  auto ok = [this](double s) {
    const RadiusValue v = map_(s);
    return 1.0 - v.dr * v.dr >= kSlopeMargin && v.r > 0.0;
  };
  // Bisect between a failing point `bad` and a passing point `good`.
  auto boundary = [&](double bad, double good) {
    for (int i = 0; i < 200 && std::abs(good - bad) > 1e-15 * (1 + std::abs(good)); ++i) {
      const double mid = 0.5 * (bad + good);
      (ok(mid) ? good : bad) = mid;
    }
    return good;
  };
  const int n = 1024;
  const double width = s_end_ - s_begin_;
  double lo = s_begin_, hi = s_end_;
  if (!ok(lo)) {
    int k = 1;
    while (k <= n && !ok(s_begin_ + width * k / n)) ++k;
    if (k > n) throw Error(ErrorCode::InvalidRadius, "|r'| >= 1 on the whole interval");
    lo = boundary(s_begin_ + width * (k - 1) / n, s_begin_ + width * k / n);
  }
  if (!ok(hi)) {
    int k = 1;
    while (k <= n && !ok(s_end_ - width * k / n)) ++k;
    if (k > n) throw Error(ErrorCode::InvalidRadius, "|r'| >= 1 on the whole interval");
    hi = boundary(s_end_ - width * (k - 1) / n, s_end_ - width * k / n);
  }
  return restricted(lo, hi);
}

}  // namespace kalpha
