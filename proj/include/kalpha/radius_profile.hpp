#pragma once

#include <functional>

namespace kalpha {

struct RadiusValue {
  double r = 0;
  double dr = 0;   // r'
  double d2r = 0;  // r''
};

enum class RadiusRepresentation { ClosedForm, Implicit, Tabulated };

/// Profiles whose 1 - r'^2 drops below this are trimmed at the ends.
inline constexpr double kSlopeMargin = 1e-12;

/// Radius function r(s) with r' and r'' on a validity interval [s_begin, s_end].
///
/// Immutable value; copies share the evaluation map.
class RadiusProfile {
 public:
  using Map = std::function<RadiusValue(double)>;

  RadiusProfile(Map map, double s_begin, double s_end, RadiusRepresentation representation,
                bool constant = false);

  static RadiusProfile constant(double r0, double s_begin, double s_end);

  [[nodiscard]] RadiusValue at(double s) const { return map_(s); }
  [[nodiscard]] double r(double s) const { return map_(s).r; }
  [[nodiscard]] double s_begin() const noexcept { return s_begin_; }
  [[nodiscard]] double s_end() const noexcept { return s_end_; }
  [[nodiscard]] RadiusRepresentation representation() const noexcept { return representation_; }
  [[nodiscard]] bool is_constant() const noexcept { return constant_; }

  [[nodiscard]] RadiusProfile restricted(double s_begin, double s_end) const;

  /// Moves each end inward to where 1 - r'^2 reaches kSlopeMargin, if it is below it there.
  /// Throws InvalidRadius if nothing of the interval survives.
  [[nodiscard]] RadiusProfile trimmed() const;

 private:
  Map map_;
  double s_begin_;
  double s_end_;
  RadiusRepresentation representation_;
  bool constant_;
};

}  // namespace kalpha
