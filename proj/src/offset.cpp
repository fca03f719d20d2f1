#include "kalpha/offset.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "kalpha/error.hpp"

namespace kalpha {

double offset_factor(double K, double H, double lambda) {
  return 1.0 - 2.0 * lambda * H + lambda * lambda * K;
}

namespace {

int sign_of(double x) { return x > 0 ? 1 : -1; }

void require_regular_offset(double factor, double lambda) {
  if (std::abs(factor) < kFocalTolerance) {
    throw Error(ErrorCode::OffsetSingularity,
                "focal point: 1 - 2 lambda H + lambda^2 K = " + std::to_string(factor) +
                    " at lambda = " + std::to_string(lambda));
  }
}

// Offset tangents through the Weingarten equations U_s = -S(X_s), U_t = -S(X_t).
TangentJet offset_tangents(const SurfaceChart& base, double lambda, double s, double t) {
  const CurvatureSample c = curvature_sample(base, s, t);
  const Eigen::Matrix2d S = shape_operator(c);
  const Vec3 us = -(S(0, 0) * c.xs + S(1, 0) * c.xt);
  const Vec3 ut = -(S(0, 1) * c.xs + S(1, 1) * c.xt);
  return {c.position + lambda * c.normal, c.xs + lambda * us, c.xt + lambda * ut};
}

}  // namespace

OffsetSignSurvey survey_offset_sign(const SurfaceChart& base, double lambda, const GridSpec& grid) {
  OffsetSignSurvey out;
  int first = 0;
  for (const GridPoint& p : sample_grid(base, grid)) {
    if (!p.sample) {
      out.epsilon.push_back(0);
      continue;
    }
    const double factor = offset_factor(p.sample->K, p.sample->H, lambda);
    require_regular_offset(factor, lambda);
    const int eps = sign_of(factor);
    if (first == 0) first = eps;
    if (eps != first) out.constant = false;
    out.epsilon.push_back(eps);
  }
  return out;
}

ParallelSurface build_parallel(const SurfaceChart& base, double lambda, const GridSpec& survey) {
  if (lambda == 0.0) throw Error(ErrorCode::InvalidArgument, "offset distance must be nonzero");
  survey_offset_sign(base, lambda, survey);

  SurfaceChart chart = [&] {
    if (base.source() == DerivativeSource::FiniteDifference) {
      return SurfaceChart::from_points(
          [base, lambda](double s, double t) {
            return Vec3(base.point(s, t) + lambda * unit_normal(base, s, t));
          },
          base.domain());
    }
    return SurfaceChart::from_tangents(
        [base, lambda](double s, double t) { return offset_tangents(base, lambda, s, t); },
        base.domain());
  }();
  chart = chart.with_scale(base.scale()).with_steps(base.steps()).flipped(base.normal_flipped());
  return {base, lambda, chart};
}

ParallelCurvatures parallel_curvatures(double K, double H, double lambda) {
  const double factor = offset_factor(K, H, lambda);
  require_regular_offset(factor, lambda);
  return {K / factor, (H - lambda * K) / factor, sign_of(factor)};
}

bool is_odd_integer(double alpha) {
  const double r = std::round(alpha);
  return std::abs(alpha - r) < 1e-12 && std::fmod(std::abs(r), 2.0) == 1.0;
}

SameSpeedVerdict check_same_speed_conditions(std::span<const CurvaturePair> samples,
                                             double lambda, double alpha, double tolerance) {
  SameSpeedVerdict v;
  v.lambda = lambda;
  v.alpha = alpha;
  v.tolerance = tolerance;
  v.case_ii_applicable = is_odd_integer(alpha);
  if (samples.empty()) {
    v.note = "no samples";
    return v;
  }
  const double l2 = lambda * lambda;
  int first_sign = 0;
  for (const CurvaturePair& p : samples) {
    v.case_i_residual = std::max(v.case_i_residual, std::abs(lambda * p.K - 2 * p.H));
    v.case_ii_residual =
        std::max(v.case_ii_residual, std::abs(l2 * p.K - 2 * lambda * p.H + 2));
    const double factor = offset_factor(p.K, p.H, lambda);
    if (std::abs(factor) < kFocalTolerance) {
      v.case_i_dual_residual = v.case_ii_dual_residual = std::numeric_limits<double>::infinity();
      v.epsilon_constant = false;
      continue;
    }
    const int eps = sign_of(factor);
    if (first_sign == 0) first_sign = eps;
    if (eps != first_sign) v.epsilon_constant = false;
    const double Kb = p.K / factor, Hb = (p.H - lambda * p.K) / factor;
    v.case_i_dual_residual = std::max(v.case_i_dual_residual, std::abs(lambda * Kb + 2 * Hb));
    v.case_ii_dual_residual =
        std::max(v.case_ii_dual_residual, std::abs(l2 * Kb + 2 * lambda * Hb + 2));
  }
  v.case_i = v.case_i_residual <= tolerance;
  v.case_ii = v.case_ii_applicable && v.case_ii_residual <= tolerance;
  if (!v.case_ii_applicable) v.note = "case ii needs an odd integer alpha";
  if (!v.epsilon_constant) v.note += (v.note.empty() ? "" : "; ") + std::string("epsilon varies");
  return v;
}

HalfOffsetVerdict half_offset_checks(std::span<const CurvaturePair> samples, double lambda,
                                     double tolerance) {
  if (lambda == 0.0) throw Error(ErrorCode::InvalidArgument, "offset distance must be nonzero");
  HalfOffsetVerdict v;
  double case_i = 0, case_ii = 0;
  int first_sign = 0;
  const double half = lambda / 2;
  for (const CurvaturePair& p : samples) {
    case_i = std::max(case_i, std::abs(lambda * p.K - 2 * p.H));
    case_ii = std::max(case_ii, std::abs(lambda * lambda * p.K - 2 * lambda * p.H + 2));
    const int eps = sign_of(offset_factor(p.K, p.H, lambda));
    if (first_sign == 0) first_sign = eps;
    if (eps != first_sign) v.sign_constant = false;
    const ParallelCurvatures h = parallel_curvatures(p.K, p.H, half);
    v.half_mean_curvature = std::max(v.half_mean_curvature, std::abs(h.H));
    v.half_gauss_deviation =
        std::max(v.half_gauss_deviation, std::abs(h.K + 4.0 / (lambda * lambda)));
  }
  v.case_i = !samples.empty() && case_i <= tolerance;
  v.case_ii = !samples.empty() && case_ii <= tolerance;
  v.minimal = v.case_i && v.half_mean_curvature <= tolerance;
  v.constant_gauss = v.case_ii && v.half_gauss_deviation <= tolerance * std::max(1.0, 4.0 / (lambda * lambda));
  return v;
}

WeingartenCoeffs WeingartenCoeffs::homogeneous(double a, double b, double c) {
  if (a == 0.0 && b == 0.0 && c == 0.0) {
    throw Error(ErrorCode::DegenerateCoefficients, "Weingarten coefficients are all zero");
  }
  return {a, b, c};
}

WeingartenCoeffs WeingartenCoeffs::unit_normalized(double a, double b) {
  return homogeneous(a, b / 2, -1.0);
}

WeingartenCoeffs WeingartenCoeffs::mean_proportional(double c) { return homogeneous(c, -0.5, 0.0); }

WeingartenCoeffs weingarten_transfer(const WeingartenCoeffs& w, double lambda) {
  return {w.a + 2 * lambda * w.b + lambda * lambda * w.c, w.b + lambda * w.c, w.c};
}

ScaledSpeed scaled_speed_translator(const WeingartenCoeffs& w,
                                    std::span<const CurvaturePair> samples, double alpha) {
  const double disc = w.b * w.b - w.a * w.c;
  if (w.b == 0.0 || disc == 0.0) {
    throw Error(ErrorCode::DegenerateCoefficients, "need b != 0 and b^2 != ac");
  }
  ScaledSpeed out;
  out.lambda = -w.a / w.b;
  out.mu = w.b * w.b / disc;
  out.epsilon = sign_of(disc);
  if (out.mu > 0 || std::abs(alpha - std::round(alpha)) < 1e-12) {
    out.speed_factor = out.epsilon * std::pow(out.mu, alpha);
  }
  for (const CurvaturePair& p : samples) {
    const double Kb = parallel_curvatures(p.K, p.H, out.lambda).K;
    const double ref = std::max(std::abs(out.mu * p.K), 1.0);
    out.max_relative_residual = std::max(out.max_relative_residual, std::abs(Kb - out.mu * p.K) / ref);
  }
  return out;
}

}  // namespace kalpha
