#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kalpha/canal.hpp"
#include "kalpha/curvature.hpp"
#include "kalpha/offset.hpp"
#include "kalpha/quadrature.hpp"

namespace kalpha {

/// K^alpha = <U, w>.
struct TranslatorSpec {
  double alpha = 1.0;
  Vec3 w = Vec3::UnitZ();

  /// Throws InvalidArgument unless alpha != 0 and |w| = 1.
  void validate() const;
};

/// K^alpha when it is real: K > 0, or any K for integer alpha (K != 0 when alpha < 0).
std::optional<double> real_power(double K, double alpha);

struct TranslatorReport {
  GridSpec grid;
  TranslatorSpec spec;
  double tolerance = 0;
  std::vector<double> residuals;  // row-major, NaN at skipped points
  int orientation = 1;            // +1 keeps the chart normal, -1 flips it
  double max_abs = 0;
  double mean_abs = 0;
  int evaluated = 0;
  int skipped_degenerate = 0;
  int skipped_complex = 0;    // K^alpha not real
  int skipped_parabolic = 0;  // |K| at or below the parabolic tolerance
  bool pass = false;

  [[nodiscard]] int skipped() const { return skipped_degenerate + skipped_complex + skipped_parabolic; }
  [[nodiscard]] double skipped_fraction() const;
};

/// Residual K^alpha - <U, w> on a grid for both normal orientations, reporting the better one.
/// Passes iff max_abs <= tolerance and at most 10% of the points are skipped.
TranslatorReport translator_residual(const SurfaceChart& chart, const TranslatorSpec& spec,
                                     const GridSpec& grid, double tolerance = 1e-6,
                                     const SampleOptions& options = {});

/// w decomposed along the spine frame, w = w1 T + w2 N + w3 B.
struct AlignmentReport {
  double max_w2 = 0;         // max |sin(phi) w2|
  double max_w3 = 0;         // max |sin(phi) w3|
  double max_tangential = 0; // max |-K^alpha + w1 cos(phi)| over points with real K^alpha
  double tolerance = 0;
  std::string offending;     // "N", "B" or empty
  bool pass = false;
};

AlignmentReport speed_alignment_check(const CanalSurface& surface, const TranslatorSpec& spec,
                                      const GridSpec& grid, double tolerance = 1e-8);

/// Per theta-ring maxima of |K^alpha - <U, w>| on a canal surface, for the better orientation.
struct RingReport {
  std::vector<double> ring_max;  // one entry per s-row
  double min_ring_max = 0;
  int orientation = 1;
};

RingReport ring_residuals(const CanalSurface& surface, const TranslatorSpec& spec,
                          const GridSpec& grid);

/// Closed-form K(r) of the Weingarten revolution families and d(ln|K|)/dr.
double weingarten_gauss(const QuadratureParams& params, double r);
double weingarten_gauss_log_derivative(const QuadratureParams& params, double r);

/// alpha K'/K - r''/r' sampled along s; it vanishes identically on a translator.
struct NonexistenceWitness {
  double alpha = 0;
  double threshold = 0;
  std::vector<double> s, residual;
  std::vector<double> roots;  // isolated sign changes
  double min_abs = 0;         // away from the exclusion zones of the roots
  bool non_isolated = false;  // a root with vanishing slope
  bool confirmed = false;
};

NonexistenceWitness weingarten_nonexistence_witness(const QuadratureSolution& solution, double alpha,
                                                    int samples = 2001, double threshold = 1e-3);

/// Least-squares a K + 2 b H + c = 0 with (a, b, c) a unit vector.
struct WeingartenFit {
  WeingartenCoeffs coeffs;
  double rms_residual = 0;
};

WeingartenFit fit_weingarten(std::span<const CurvaturePair> samples);

/// Same-speed conditions for every lambda in [lambda_min, lambda_max] in steps of `step`.
struct ParallelScan {
  int scanned = 0;
  int skipped_focal = 0;
  std::vector<double> passing;  // lambdas where either condition held
  double min_case_i = 0;        // smallest case i residual seen
  double min_case_ii = 0;       // smallest case ii residual seen (odd alpha only)
};

ParallelScan parallel_scan(std::span<const CurvaturePair> samples, double alpha, double lambda_min,
                           double lambda_max, double step, double tolerance);

}  // namespace kalpha
