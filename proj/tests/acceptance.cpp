// One PASS/FAIL line per acceptance criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kalpha/canal.hpp"
#include "kalpha/cli.hpp"
#include "kalpha/curvature.hpp"
#include "kalpha/error.hpp"
#include "kalpha/flow.hpp"
#include "kalpha/offset.hpp"
#include "kalpha/quadrature.hpp"
#include "kalpha/radius_ode.hpp"
#include "kalpha/shapes.hpp"
#include "kalpha/spine.hpp"
#include "kalpha/translator.hpp"

using namespace kalpha;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double rel(double value, double reference) { return std::abs(value - reference) / std::max(1.0, std::abs(reference)); }

QuadratureParams alpha1_params() {
  QuadratureParams p;
  p.family = QuadratureFamily::Alpha1;
  p.c1 = -2;
  p.r_min = 1.0;
  p.r_max = 1.35;
  p.c2 = radius1_s(1.0, 1.0);
  return p;
}

QuadratureParams alpha12_params() {
  QuadratureParams p;
  p.family = QuadratureFamily::Alpha12A;
  p.c1 = 1;
  p.branch = -1;
  p.r_min = 0.715;
  p.r_max = 0.985;
  return p;
}

QuadratureParams weingarten(QuadratureFamily f, double a, double b, double c, double c1, double lo, double hi) {
  QuadratureParams p;
  p.family = f;
  p.a = a;
  p.b = b;
  p.c = c;
  p.c1 = c1;
  p.r_min = lo;
  p.r_max = hi;
  return p;
}

// 1 ------------------------------------------------------------------------
Outcome curvature_oracle() {
  double analytic = 0, fd = 0;
  for (double r : {0.5, 1.0, 2.0}) {
    const SurfaceChart chart = shapes::sphere(r);
    for (const auto& [c, worst] : {std::pair{chart, &analytic}, std::pair{chart.finite_difference_view(), &fd}}) {
      for (const GridPoint& p : sample_grid(c, {16, 16})) {
        if (!p.sample) return {false, "degenerate sphere sample"};
        *worst = std::max({*worst, std::abs(p.sample->K - 1 / (r * r)), std::abs(std::abs(p.sample->H) - 1 / r)});
      }
    }
  }
  return {analytic <= 1e-8 && fd <= 1e-4, "analytic " + fmt(analytic) + " <= 1e-8, finite-difference " + fmt(fd) + " <= 1e-4"};
}

// 2 ------------------------------------------------------------------------
Outcome parallel_transfer() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0;
  int done = 0;
  while (done < 50) {
    const SurfaceChart base = shapes::quadric_graph(u(rng), u(rng), u(rng));
    const double s = 0.7 * u(rng), t = 0.7 * u(rng), lambda = 0.6 * u(rng);
    const CurvatureSample b = curvature_sample(base, s, t);
    if (std::abs(lambda) < 0.05 || std::abs(offset_factor(b.K, b.H, lambda)) < 0.1) continue;
    const ParallelSurface par = build_parallel(base.with_domain({s - 0.05, s + 0.05, t - 0.05, t + 0.05, false}), lambda);
    const CurvatureSample d = curvature_sample(par.chart, s, t);
    // the offset point and normal, checked directly
    const Vec3 expected = b.position + lambda * b.normal;
    if ((d.position - expected).norm() > 1e-12) return {false, "offset point mismatch"};
    const ParallelCurvatures f = parallel_curvatures(b.K, b.H, lambda);
    worst = std::max({worst, rel(d.K, f.K), rel(f.epsilon * d.H, f.H)});
    ++done;
  }
  return {worst <= 1e-6, "max relative " + fmt(worst) + " <= 1e-6 over 50 samples"};
}

// 3 ------------------------------------------------------------------------
Outcome transfer_identity() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2, 2);
  double worst = 0;
  int done = 0;
  while (done < 1000) {
    const double a = u(rng), b = u(rng), K = u(rng), H = u(rng), lambda = 0.5 * u(rng);
    const double factor = 1 - 2 * lambda * H + lambda * lambda * K;
    if (std::abs(factor) < 0.1) continue;
    const double c = -(a * K + 2 * b * H);
    // offset curvatures from the principal curvatures k/(1 - lambda k)
    const double disc = std::sqrt(std::max(0.0, H * H - K));
    if (H * H - K < 0) continue;
    const double k1 = H + disc, k2 = H - disc;
    const double b1 = k1 / (1 - lambda * k1), b2 = k2 / (1 - lambda * k2);
    const double Kb = b1 * b2, Hb = (b1 + b2) / 2;
    const WeingartenCoeffs m = weingarten_transfer({a, b, c}, lambda);
    const double scale = std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c)}) * std::max({1.0, std::abs(Kb), std::abs(Hb)});
    worst = std::max(worst, std::abs(m.a * Kb + 2 * m.b * Hb + m.c) / scale);
    ++done;
  }
  return {worst <= 1e-10, "max scaled residual " + fmt(worst) + " <= 1e-10 over 1000 tuples"};
}

// 4 ------------------------------------------------------------------------
Outcome canal_closed_forms() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0, identity = 0;
  for (int k = 0; k < 10; ++k) {
    const double a = 0.8 + 0.7 * u(rng), b = -0.5 + u(rng), r0 = 0.2 + 0.1 * u(rng);
    const double amp = 0.02 + 0.03 * u(rng), omega = 1 + 2 * u(rng), phase = 6.28 * u(rng);
    RadiusProfile radius(
        [=](double s) {
          const double x = omega * s + phase;
          return RadiusValue{r0 + amp * std::sin(x), amp * omega * std::cos(x), -amp * omega * omega * std::sin(x)};
        },
        0.0, 2.0, RadiusRepresentation::ClosedForm);
    const CanalSurface canal = build_canal(make_spine(HelixSpec{a, b, 2.0}), radius);
    for (int q = 0; q < 10; ++q) {
      const double s = 0.05 + 1.9 * u(rng), t = 6.283185307179586 * u(rng);
      const CanalCurvatures c = canal_curvatures(canal, s, t);
      const CurvatureSample e = curvature_sample(canal.chart, s, t);
      worst = std::max({worst, rel(e.K, c.K), rel(e.H, c.H)});
    }
    const GridSpec grid{40, 32};
    for (int i = 0; i < grid.n_s; ++i) {
      for (int j = 0; j < grid.n_theta; ++j) {
        const auto [s, t] = grid.node(canal.chart.domain(), i, j);
        const CanalCurvatures c = canal_curvatures(canal, s, t);
        if (!c.parabolic) identity = std::max(identity, std::abs(linear_identity_residual(c.K, c.H, radius.r(s))));
      }
    }
  }
  return {worst <= 1e-6 && identity <= 1e-9,
          "closed form vs engine " + fmt(worst) + " <= 1e-6, linear identity " + fmt(identity) + " <= 1e-9"};
}

// 5 ------------------------------------------------------------------------
Outcome translator_alpha1() {
  const CanalSurface surface = surface_of_revolution(quadrature_radius(alpha1_params()).profile().restricted(0.0, 0.72));
  const TranslatorReport rep = translator_residual(surface.chart, {1.0, Vec3::UnitZ()}, {200, 64}, 1e-6);
  double identity = 0;
  for (int k = 0; k <= 400; ++k) {
    const double s = 0.72 * k / 400;
    const RadiusValue v = surface.radius.at(s);
    const double r = v.r, sin_phi = std::sqrt(1 - v.dr * v.dr), cos_phi = -v.dr;
    identity = std::max({identity, std::abs(r * sin_phi - 2 * std::sqrt(r * r - 1) / r),
                         std::abs(r * cos_phi - (2 - r * r) / r)});
  }
  const double length = surface.radius.s_end() - surface.radius.s_begin();
  return {rep.pass && length >= 0.7 && identity <= 1e-8,
          "max |K - <U,w>| " + fmt(rep.max_abs) + " <= 1e-6 on s in [0, 0.72], identities " + fmt(identity) + " <= 1e-8"};
}

// 6 ------------------------------------------------------------------------
Outcome translator_alpha_minus_half() {
  const QuadratureSolution sol = quadrature_radius(alpha12_params());
  const CanalSurface surface = surface_of_revolution(sol.profile());
  const TranslatorReport rep = translator_residual(surface.chart, {-0.5, Vec3::UnitZ()}, {200, 64}, 1e-6);
  const double length = sol.s_max() - sol.s_min();
  return {rep.pass && length >= 0.4,
          "max |K^(-1/2) - <U,w>| " + fmt(rep.max_abs) + " <= 1e-6 on an interval of length " + fmt(length) + " >= 0.4"};
}

// 7 ------------------------------------------------------------------------
double ode_gap(const QuadratureSolution& sol, double alpha, double s_start, double s_end, double& shared) {
  const RadiusValue v0 = sol.at(s_start);
  const OdeSolution ode = solve_radius_ode(alpha, v0.r, v0.dr, s_start, s_end);
  const double lo = std::max(ode.profile.s_begin(), sol.s_min()), hi = std::min(ode.profile.s_end(), sol.s_max());
  shared = hi - lo;
  double gap = 0;
  for (int k = 0; k <= 1000; ++k) {
    const double s = lo + (hi - lo) * k / 1000;
    gap = std::max(gap, std::abs(ode.profile.r(s) - sol.r_of_s(s)));
  }
  return gap;
}

Outcome ode_cross_check() {
  const QuadratureSolution one = quadrature_radius(alpha1_params());
  const QuadratureSolution half = quadrature_radius(alpha12_params());
  double shared1 = 0, shared2 = 0;
  const double gap1 = ode_gap(one, 1.0, 0.0, 0.72, shared1);
  const double gap2 = ode_gap(half, -0.5, half.s_min() + 0.01, half.s_max() - 0.01, shared2);

  // constant of motion ((r^2 r' + 1)^2 - 1 - r^4) / r^2 = c1 along the integrated trajectory
  const RadiusValue v0 = one.at(0.0);
  const OdeSolution ode = solve_radius_ode(1.0, v0.r, v0.dr, 0.0, 0.72);
  auto invariant = [](double r, double dr) { return ((r * r * dr + 1) * (r * r * dr + 1) - 1 - r * r * r * r) / (r * r); };
  const double c0 = invariant(ode.r.front(), ode.dr.front());
  double drift = 0;
  for (std::size_t k = 0; k < ode.r.size(); ++k) drift = std::max(drift, std::abs(invariant(ode.r[k], ode.dr[k]) - c0));
  const bool pass = gap1 <= 1e-6 && gap2 <= 1e-6 && drift <= 1e-7 && shared1 > 0.5 && shared2 > 0.3;
  return {pass, "alpha=1 gap " + fmt(gap1) + " over " + fmt(shared1) + ", alpha=-1/2 gap " + fmt(gap2) + " over " +
                    fmt(shared2) + " (<= 1e-6), invariant drift " + fmt(drift) + " <= 1e-7"};
}

// 8 ------------------------------------------------------------------------
Outcome nonexistence() {
  // (a) tubes
  std::mt19937_64 rng(4242);
  std::normal_distribution<double> n;
  const CanalSurface tube = build_canal(make_spine(HelixSpec{1.0, 0.5, 3.0}), RadiusProfile::constant(0.3, 0.0, 3.0));
  double tube_min = 1e300;
  for (int k = 0; k < 20; ++k) {
    const Vec3 w = Vec3(n(rng), n(rng), n(rng)).normalized();
    tube_min = std::min(tube_min, ring_residuals(tube, {1.0, w}, {60, 64}).min_ring_max);
  }
  // (b) Weingarten families
  const std::vector<QuadratureParams> families{
      weingarten(QuadratureFamily::WeingartenWC1, 0, 0, 1, -1, 0.5, 2),
      weingarten(QuadratureFamily::WeingartenWC1, 0, 0, 0, -0.5, 1, 2),
      weingarten(QuadratureFamily::WeingartenWC1, 0, 0, 2, -1, 0.5, 3),
      weingarten(QuadratureFamily::WeingartenWC1, 0, 0, 0.5, -0.3, 0.5, 2),
      weingarten(QuadratureFamily::WeingartenWC1, 0, 0, -0.2, -0.5, 1, 2.5),
      weingarten(QuadratureFamily::WeingartenWC2, 0, 2, 0, 1, 0.5, 2),
      weingarten(QuadratureFamily::WeingartenWC2, -1, 1, 0, 0.5, 0.5, 2),
      weingarten(QuadratureFamily::WeingartenWC2, 0.5, 3, 0, 1, 0.5, 2),
      weingarten(QuadratureFamily::WeingartenWC2, -2, 0, 0, 1, 0.5, 2),
      weingarten(QuadratureFamily::WeingartenWC2, 0, 1, 0, 0.5, 0.6, 2),
  };
  double weingarten_min = 1e300;
  bool confirmed = true;
  for (const QuadratureParams& p : families) {
    const QuadratureSolution sol = weingarten_radius(p);
    for (double alpha : {1.0, 2.0, -0.5}) {
      const NonexistenceWitness w = weingarten_nonexistence_witness(sol, alpha);
      weingarten_min = std::min(weingarten_min, w.min_abs);
      confirmed = confirmed && w.confirmed;
    }
  }
  // (c) lambda scan on the alpha = 1 translator
  const CanalSurface surface = surface_of_revolution(quadrature_radius(alpha1_params()).profile().restricted(0.0, 0.72));
  const auto pairs = curvature_pairs(sample_grid(surface.chart, {40, 8}));
  const ParallelScan scan = parallel_scan(pairs, 1.0, -5, 5, 1e-3, 1e-6);
  const bool pass = tube_min >= 0.1 && confirmed && weingarten_min >= 1e-3 && scan.passing.empty();
  return {pass, "tube min ring max " + fmt(tube_min) + " >= 0.1, Weingarten min " + fmt(weingarten_min) +
                    " >= 1e-3, lambda scan passing " + std::to_string(scan.passing.size()) + " of " +
                    std::to_string(scan.scanned)};
}

// 9 ------------------------------------------------------------------------
double mean_curvature_gap(const QuadratureParams& p, double target) {
  const CanalSurface surface = surface_of_revolution(weingarten_radius(p).profile());
  double worst = 0;
  for (const GridPoint& g : sample_grid(surface.chart, {60, 16})) {
    if (!g.sample) continue;
    worst = std::max(worst, std::abs(std::abs(g.sample->H) - target));
  }
  return worst;
}

Outcome weingarten_constructions() {
  const double cmc = mean_curvature_gap(weingarten(QuadratureFamily::WeingartenWC2, 0, 2, 0, 1, 0.5, 2), 0.5);
  const double minimal = mean_curvature_gap(weingarten(QuadratureFamily::WeingartenWC1, 0, 0, 0, -0.5, 1, 2), 0.0);
  return {cmc <= 1e-6 && minimal <= 1e-6, "WC2 a=0 b=2 max |H - 1/2| " + fmt(cmc) + ", WC1 c=0 max |H| " + fmt(minimal)};
}

// 10 -----------------------------------------------------------------------
double translator_flow(double dt, int nodes) {
  const RadiusProfile radius = quadrature_radius(alpha1_params()).profile().restricted(0.0, 0.72);
  FlowOptions o;
  o.alpha = 1;
  o.dt = dt;
  o.horizon = 0.05;
  o.boundary = BoundaryPolicy::Translate;
  return run_flow(profile_from_radius(radius, nodes), o).final_deviation();
}

Outcome flow_check() {
  const double coarse = translator_flow(1e-4, 400);
  const double fine = translator_flow(5e-5, 800);
  const double ratio = coarse / fine;

  FlowOptions o;
  o.alpha = 1;
  o.dt = 1e-4;
  o.horizon = 0.2;
  o.drift = 0;
  for (int k = 0; k < 20; ++k) o.snapshot_times.push_back(0.01 * k);
  const FlowResult sphere = run_flow(sphere_profile(1.0, 400), o);
  std::vector<double> t, r3;
  for (const FlowSnapshot& s : sphere.snapshots) {
    const double R = fit_axis_circle(s.state);
    t.push_back(s.state.t);
    r3.push_back(R * R * R);
  }
  const double n = static_cast<double>(t.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    st += t[k];
    sy += r3[k];
    stt += t[k] * t[k];
    sty += t[k] * r3[k];
  }
  const double slope = (n * sty - st * sy) / (n * stt - st * st);
  const bool pass = coarse <= 5e-3 && ratio >= 1.5 && std::abs(slope + 3) <= 0.06;
  return {pass, "deviation " + fmt(coarse) + " <= 5e-3, refinement ratio " + fmt(ratio) + " >= 1.5, R^3 slope " +
                    fmt(slope) + " in -3 +/- 2%"};
}

// 11 -----------------------------------------------------------------------
int cli(const std::vector<std::string>& args, std::string& out) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  out = o.str();
  return code;
}

Outcome cli_contract() {
  const auto dir = std::filesystem::temp_directory_path() / "kalpha_acceptance";
  std::filesystem::create_directories(dir);
  std::string first, second, scratch;
  const int a = cli({"witness", "tube-nonexistence", "--seed", "3"}, first);
  const int b = cli({"witness", "tube-nonexistence", "--seed", "3"}, second);
  const bool identical = a == b && first == second && !first.empty();

  const auto bad = (dir / "missing_c1.json").string();
  std::ofstream(bad) << R"({"schema": "kalpha/1", "radius": {"type": "quadrature", "family": "alpha1", "r_range": [1, 1.3]}})";
  const auto tube = (dir / "tube.json").string();
  std::ofstream(tube) << R"({"schema": "kalpha/1",
    "surface": {"kind": "tube", "spine": {"type": "helix", "a": 1, "b": 0.5, "length": 3}, "r": 0.3},
    "translator": {"alpha": 1, "w": [0, 0, 1]}, "grid": [40, 32]})";
  const int pass_code = cli({"witness", "translator-alpha1"}, scratch);
  const int config_code = cli({"solve", "--config", bad, "--out", dir.string()}, scratch);
  const int fail_code = cli({"translator", "--config", tube}, scratch);
  std::filesystem::remove_all(dir);
  const bool codes = pass_code == 0 && config_code == 1 && fail_code == 2;
  return {identical && codes, std::string("reports ") + (identical ? "identical" : "differ") + ", exit codes " +
                                  std::to_string(pass_code) + "/" + std::to_string(config_code) + "/" +
                                  std::to_string(fail_code) + " (expected 0/1/2)"};
}

}  // namespace

int main() {
  setenv("KALPHA_LOG", "quiet", 1);
  struct Criterion {
    int id;
    const char* name;
    double budget;  // seconds, 0 for none
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "curvature oracle", 1, curvature_oracle},
      {2, "parallel transfer", 5, parallel_transfer},
      {3, "Weingarten transfer identity", 0, transfer_identity},
      {4, "canal closed forms", 0, canal_closed_forms},
      {5, "alpha = 1 translator", 10, translator_alpha1},
      {6, "alpha = -1/2 translator", 0, translator_alpha_minus_half},
      {7, "ODE and quadrature cross-check", 0, ode_cross_check},
      {8, "nonexistence witnesses", 0, nonexistence},
      {9, "Weingarten constructions", 0, weingarten_constructions},
      {10, "flow soliton and sphere law", 60, flow_check},
      {11, "CLI determinism and exit codes", 0, cli_contract},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget > 0 && seconds > c.budget) {
      o.pass = false;
      o.detail += ", over the " + fmt(c.budget) + " s budget";
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2d %s: %s (%s; %.2f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
