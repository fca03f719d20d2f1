#include "kalpha/translator.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "kalpha/error.hpp"

namespace kalpha {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kMaxSkippedFraction = 0.10;

}  // namespace

void TranslatorSpec::validate() const {
  if (alpha == 0 || !std::isfinite(alpha)) throw Error(ErrorCode::InvalidArgument, "alpha must be nonzero");
  if (std::abs(w.norm() - 1) > 1e-9) throw Error(ErrorCode::InvalidArgument, "w must be a unit vector");
}

std::optional<double> real_power(double K, double alpha) {
  if (K > 0) return std::pow(K, alpha);
  if (alpha != std::round(alpha)) return std::nullopt;
  if (K == 0 && alpha < 0) return std::nullopt;
  return std::pow(K, alpha);
}

double TranslatorReport::skipped_fraction() const {
  const int total = evaluated + skipped();
  return total == 0 ? 1.0 : static_cast<double>(skipped()) / total;
}

TranslatorReport translator_residual(const SurfaceChart& chart, const TranslatorSpec& spec,
                                     const GridSpec& grid, double tolerance,
                                     const SampleOptions& options) {
  spec.validate();
  grid.validate();
  TranslatorReport rep;
  rep.grid = grid;
  rep.spec = spec;
  rep.tolerance = tolerance;

  const auto points = sample_grid(chart, grid, options);
  std::vector<double> plus(points.size(), kNan), minus(points.size(), kNan);
  for (std::size_t k = 0; k < points.size(); ++k) {
    const GridPoint& p = points[k];
    if (!p.sample) {
      ++rep.skipped_degenerate;
      continue;
    }
    if (p.flags.near_parabolic) {
      ++rep.skipped_parabolic;
      continue;
    }
    const auto power = real_power(p.sample->K, spec.alpha);
    if (!power) {
      ++rep.skipped_complex;
      continue;
    }
    const double speed = p.sample->normal.dot(spec.w);
    plus[k] = *power - speed;
    minus[k] = *power + speed;
    ++rep.evaluated;
  }

  auto norms = [](const std::vector<double>& v) {
    double mx = 0, sum = 0;
    int n = 0;
    for (double x : v) {
      if (std::isnan(x)) continue;
      mx = std::max(mx, std::abs(x));
      sum += std::abs(x);
      ++n;
    }
    return std::pair{mx, n ? sum / n : 0.0};
  };
  const auto [max_plus, mean_plus] = norms(plus);
  const auto [max_minus, mean_minus] = norms(minus);
  if (max_minus < max_plus) {
    rep.orientation = -1;
    rep.residuals = std::move(minus);
    rep.max_abs = max_minus;
    rep.mean_abs = mean_minus;
  } else {
    rep.residuals = std::move(plus);
    rep.max_abs = max_plus;
    rep.mean_abs = mean_plus;
  }
  rep.pass = rep.evaluated > 0 && rep.max_abs <= tolerance &&
             rep.skipped_fraction() <= kMaxSkippedFraction;
  return rep;
}

AlignmentReport speed_alignment_check(const CanalSurface& surface, const TranslatorSpec& spec,
                                      const GridSpec& grid, double tolerance) {
  spec.validate();
  grid.validate();
  AlignmentReport rep;
  rep.tolerance = tolerance;
  const ChartDomain& domain = surface.chart.domain();
  for (int i = 0; i < grid.n_s; ++i) {
    for (int j = 0; j < grid.n_theta; ++j) {
      const auto [s, theta] = grid.node(domain, i, j);
      const SpineFrame f = surface.spine.frame(s);
      const RadiusValue v = surface.radius.at(s);
      const double cos_phi = -v.dr;
      const double sin_phi = std::sqrt(std::max(0.0, 1 - v.dr * v.dr));
      const double w1 = spec.w.dot(f.T), w2 = spec.w.dot(f.N), w3 = spec.w.dot(f.B);
      rep.max_w2 = std::max(rep.max_w2, std::abs(sin_phi * w2));
      rep.max_w3 = std::max(rep.max_w3, std::abs(sin_phi * w3));
      const CanalCurvatures c = canal_curvatures(surface, s, theta);
      if (c.parabolic) continue;
      if (const auto power = real_power(c.K, spec.alpha)) {
        rep.max_tangential = std::max(rep.max_tangential, std::abs(-*power + w1 * cos_phi));
      }
    }
  }
  if (rep.max_w2 > tolerance || rep.max_w3 > tolerance) rep.offending = rep.max_w2 >= rep.max_w3 ? "N" : "B";
  rep.pass = rep.offending.empty();
  return rep;
}

RingReport ring_residuals(const CanalSurface& surface, const TranslatorSpec& spec,
                          const GridSpec& grid) {
  spec.validate();
  grid.validate();
  const ChartDomain& domain = surface.chart.domain();
  std::vector<double> plus(grid.n_s, 0.0), minus(grid.n_s, 0.0);
  for (int i = 0; i < grid.n_s; ++i) {
    for (int j = 0; j < grid.n_theta; ++j) {
      const auto [s, theta] = grid.node(domain, i, j);
      const CanalCurvatures c = canal_curvatures(surface, s, theta);
      if (c.parabolic) continue;
      const auto power = real_power(c.K, spec.alpha);
      if (!power) continue;
      const double speed = canal_normal(surface, s, theta).dot(spec.w);
      plus[i] = std::max(plus[i], std::abs(*power - speed));
      minus[i] = std::max(minus[i], std::abs(*power + speed));
    }
  }
  const double min_plus = *std::min_element(plus.begin(), plus.end());
  const double min_minus = *std::min_element(minus.begin(), minus.end());
  RingReport rep;
  if (min_minus > min_plus) {
    rep.ring_max = std::move(minus);
    rep.min_ring_max = min_minus;
    rep.orientation = -1;
  } else {
    rep.ring_max = std::move(plus);
    rep.min_ring_max = min_plus;
  }
  return rep;
}

double weingarten_gauss(const QuadratureParams& p, double r) {
  switch (p.family) {
    case QuadratureFamily::WeingartenWC1: return -1.0 / (r * (r + 2 * p.c));
    case QuadratureFamily::WeingartenWC2: return (p.b + 2 * r) / (2 * p.a * r - p.b * r * r);
    default: throw Error(ErrorCode::InvalidArgument, "not a Weingarten family");
  }
}

double weingarten_gauss_log_derivative(const QuadratureParams& p, double r) {
  switch (p.family) {
    case QuadratureFamily::WeingartenWC1: return -(1.0 / r + 1.0 / (r + 2 * p.c));
    case QuadratureFamily::WeingartenWC2:
      return 2.0 / (p.b + 2 * r) - (2 * p.a - 2 * p.b * r) / (2 * p.a * r - p.b * r * r);
    default: throw Error(ErrorCode::InvalidArgument, "not a Weingarten family");
  }
}

NonexistenceWitness weingarten_nonexistence_witness(const QuadratureSolution& solution, double alpha,
                                                    int samples, double threshold) {
  if (alpha == 0) throw Error(ErrorCode::InvalidArgument, "alpha must be nonzero");
  if (samples < 3) throw Error(ErrorCode::InvalidArgument, "need at least 3 samples");
  const QuadratureParams& params = solution.params();
  NonexistenceWitness w;
  w.alpha = alpha;
  w.threshold = threshold;
  const double s0 = solution.s_min(), width = solution.s_max() - s0;
  for (int k = 0; k < samples; ++k) {
    const double s = s0 + width * (k + 0.5) / samples;
    const RadiusValue v = solution.at(s);
    const double dlog = weingarten_gauss_log_derivative(params, v.r);
    w.s.push_back(s);
    w.residual.push_back(alpha * dlog * v.dr - v.d2r / v.dr);
  }

  std::vector<std::pair<double, double>> zones;  // (root, exclusion radius)
  for (int k = 0; k + 1 < samples; ++k) {
    const double a = w.residual[k], b = w.residual[k + 1];
    if (!(a * b <= 0)) continue;
    const double ds = w.s[k + 1] - w.s[k];
    const double slope = (b - a) / ds;
    if (std::abs(slope) < 1e-9) {
      w.non_isolated = true;
      continue;
    }
    const double root = a == b ? w.s[k] : w.s[k] - a / slope;
    w.roots.push_back(root);
    zones.emplace_back(root, std::max(2 * threshold / std::abs(slope), ds));
  }
  w.min_abs = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const bool excluded = std::any_of(zones.begin(), zones.end(), [&](const auto& z) {
      return std::abs(w.s[k] - z.first) <= z.second;
    });
    if (!excluded) w.min_abs = std::min(w.min_abs, std::abs(w.residual[k]));
  }
  w.confirmed = !w.non_isolated && std::isfinite(w.min_abs) && w.min_abs >= threshold;
  return w;
}

WeingartenFit fit_weingarten(std::span<const CurvaturePair> samples) {
  if (samples.size() < 3) throw Error(ErrorCode::InvalidArgument, "fit needs at least 3 samples");
  Eigen::MatrixX3d m(samples.size(), 3);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    m.row(k) << samples[k].K, 2 * samples[k].H, 1.0;
  }
  Eigen::JacobiSVD<Eigen::MatrixX3d> svd(m, Eigen::ComputeFullV);
  const Eigen::Vector3d v = svd.matrixV().col(2);
  WeingartenFit fit;
  fit.coeffs = {v[0], v[1], v[2]};
  fit.rms_residual = svd.singularValues()[2] / std::sqrt(static_cast<double>(samples.size()));
  return fit;
}

ParallelScan parallel_scan(std::span<const CurvaturePair> samples, double alpha, double lambda_min,
                           double lambda_max, double step, double tolerance) {
  if (!(step > 0) || !(lambda_max >= lambda_min)) {
    throw Error(ErrorCode::InvalidArgument, "scan needs step > 0 and lambda_max >= lambda_min");
  }
  ParallelScan scan;
  scan.min_case_i = scan.min_case_ii = std::numeric_limits<double>::infinity();
  const long n = std::lround((lambda_max - lambda_min) / step);
  for (long k = 0; k <= n; ++k) {
    const double lambda = lambda_min + step * k;
    if (std::abs(lambda) < 0.5 * step) continue;
    ++scan.scanned;
    bool focal = false;
    for (const CurvaturePair& p : samples) {
      if (std::abs(offset_factor(p.K, p.H, lambda)) < kFocalTolerance) focal = true;
    }
    if (focal) {
      ++scan.skipped_focal;
      continue;
    }
    const SameSpeedVerdict v = check_same_speed_conditions(samples, lambda, alpha, tolerance);
    scan.min_case_i = std::min(scan.min_case_i, v.case_i_residual);
    if (v.case_ii_applicable) scan.min_case_ii = std::min(scan.min_case_ii, v.case_ii_residual);
    if (v.any()) scan.passing.push_back(lambda);
  }
  return scan;
}

}  // namespace kalpha
