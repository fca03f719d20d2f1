#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kalpha/radius_profile.hpp"

namespace kalpha {

/// Radius families given by s(r) = c2 + integral of ds/dr.
///
///   Alpha1        ds/dr = r^2 / (-1 + sign sqrt(r^4 + c1 r^2 + 1))          (alpha = 1)
///   Alpha12A      ds/dr = sign (r^2 - sqrt(c1 + r^4 - 2 r^2))^(-1/2)         (alpha = -1/2)
///   Alpha12B      ds/dr = sign (sqrt(r^4 - 2 r^2 + c1) + r^2)^(-1/2)         (alpha = -1/2)
///   WeingartenWC1 ds/dr = sign sqrt((r + c) / (r + c + c1))                  (H = c K)
///   WeingartenWC2 ds/dr = sign sqrt(D / (D - c1)),  D = r^2 + b r - a        (a K + b H = 1)
enum class QuadratureFamily { Alpha1, Alpha12A, Alpha12B, WeingartenWC1, WeingartenWC2 };

std::string to_string(QuadratureFamily family);
/// Accepts "alpha1", "alpha12-a", "alpha12-b", "weingarten-WC1", "weingarten-WC2".
QuadratureFamily parse_family(const std::string& name);

struct QuadratureParams {
  QuadratureFamily family = QuadratureFamily::Alpha1;
  double c1 = 0;
  double a = 0;  // WC2
  double b = 0;  // WC2
  double c = 0;  // WC1
  int branch = 1;  // the +/- sign in the integrand
  double r_min = 0;
  double r_max = 0;
  /// s at r_anchor; when absent, chosen so that the smallest tabulated s is 0.
  std::optional<double> c2;
  std::optional<double> r_anchor;  // defaults to r_min
  int table_size = 257;
};

/// Tabulated monotone solution s(r) with inverse r(s).
class QuadratureSolution {
 public:
  explicit QuadratureSolution(QuadratureParams params);

  [[nodiscard]] const QuadratureParams& params() const noexcept { return params_; }
  [[nodiscard]] QuadratureFamily family() const noexcept { return params_.family; }
  /// Translator power of the family; empty for the Weingarten families.
  [[nodiscard]] std::optional<double> alpha() const;

  [[nodiscard]] double ds_dr(double r) const;
  [[nodiscard]] double d2s_dr2(double r) const;
  [[nodiscard]] double s_of_r(double r) const;
  [[nodiscard]] double r_of_s(double s) const;
  /// r, r', r'' at arc length s.
  [[nodiscard]] RadiusValue at(double s) const;
  /// r' and r'' as functions of r.
  [[nodiscard]] RadiusValue at_radius(double r) const;

  [[nodiscard]] double s_min() const noexcept { return s_lo_; }
  [[nodiscard]] double s_max() const noexcept { return s_hi_; }
  [[nodiscard]] const std::vector<double>& table_r() const noexcept { return r_; }
  [[nodiscard]] const std::vector<double>& table_s() const noexcept { return s_; }

  /// RadiusProfile over [s_min, s_max].
  [[nodiscard]] RadiusProfile profile() const;

 private:
  [[nodiscard]] double integrate(double r0, double r1) const;

  QuadratureParams params_;
  std::vector<double> r_;
  std::vector<double> s_;
  bool increasing_ = true;
  double s_lo_ = 0, s_hi_ = 0;
};

/// Throws IntegrandDomainError naming the offending r, NonMonotone if s(r) is not strictly monotone.
QuadratureSolution quadrature_radius(const QuadratureParams& params);

/// Same machinery restricted to the Weingarten families.
QuadratureSolution weingarten_radius(const QuadratureParams& params);

/// r - sqrt(2) artanh(r / sqrt(2)) + c2, the alpha = 1 solution with c1 = -2.
double radius1_s(double r, double c2 = 0.0);
/// sign (1/sqrt(2)) ln(r + sqrt(r^2 - 1/2)) + c2, the alpha = -1/2 solution with c1 = 1.
double radius2_s(double r, double c2 = 0.0, int sign = 1);
/// Closed-form inverse of radius2_s: r = cosh(sqrt(2) (s - s0)) / sqrt(2), over [s_begin, s_end].
RadiusProfile radius2_profile(double s0, double s_begin, double s_end);

}  // namespace kalpha
