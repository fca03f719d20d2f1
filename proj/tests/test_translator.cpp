#include <doctest.h>

#include <cmath>
#include <vector>

#include "generators.hpp"
#include "kalpha/error.hpp"
#include "kalpha/quadrature.hpp"
#include "kalpha/radius_ode.hpp"
#include "kalpha/shapes.hpp"
#include "kalpha/translator.hpp"

using namespace kalpha;
using kalpha::testing::Gen;

namespace {

QuadratureParams alpha1() {
  QuadratureParams p;
  p.family = QuadratureFamily::Alpha1;
  p.c1 = -2;
  p.r_min = 1.0;
  p.r_max = 1.35;
  p.c2 = radius1_s(1.0, 1.0);
  return p;
}

QuadratureParams alpha12() {
  QuadratureParams p;
  p.family = QuadratureFamily::Alpha12A;
  p.c1 = 1;
  p.branch = -1;
  p.r_min = 0.715;
  p.r_max = 0.985;
  return p;
}

QuadratureParams wc1(double c, double c1, double lo, double hi) {
  QuadratureParams p;
  p.family = QuadratureFamily::WeingartenWC1;
  p.c = c;
  p.c1 = c1;
  p.r_min = lo;
  p.r_max = hi;
  return p;
}

QuadratureParams wc2(double a, double b, double c1, double lo, double hi) {
  QuadratureParams p;
  p.family = QuadratureFamily::WeingartenWC2;
  p.a = a;
  p.b = b;
  p.c1 = c1;
  p.r_min = lo;
  p.r_max = hi;
  return p;
}

// Composite Simpson, an independent check on the adaptive quadrature.
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4 : 2);
  return sum * h / 3;
}

}  // namespace

TEST_CASE("real powers") {
  CHECK(*real_power(4.0, 0.5) == doctest::Approx(2.0));
  CHECK(*real_power(-2.0, 3.0) == doctest::Approx(-8.0));
  CHECK_FALSE(real_power(-2.0, 0.5).has_value());
  CHECK_FALSE(real_power(0.0, -1.0).has_value());
  CHECK_THROWS_AS((TranslatorSpec{0.0, Vec3::UnitZ()}.validate()), Error);
  CHECK_THROWS_AS((TranslatorSpec{1.0, Vec3(1, 1, 0)}.validate()), Error);
}

TEST_CASE("alpha = 1 quadrature matches the closed form") {
  const QuadratureSolution sol = quadrature_radius(alpha1());
  // s(1) = c2 anchors the table
  CHECK(sol.s_of_r(1.0) == doctest::Approx(*alpha1().c2));
  for (double r = 1.0; r <= 1.35; r += 0.01)
    CHECK(sol.s_of_r(r) - sol.s_of_r(1.0) == doctest::Approx(radius1_s(r) - radius1_s(1.0)).epsilon(1e-10));
  // the closed form differentiates to the integrand
  for (double r : {1.05, 1.2, 1.3}) {
    const double h = 1e-5;
    const double d = (radius1_s(r + h) - radius1_s(r - h)) / (2 * h);
    CHECK(d == doctest::Approx(sol.ds_dr(r)).epsilon(1e-7));
  }
  CHECK(sol.alpha().value() == 1.0);
}

TEST_CASE("alpha = -1/2 quadrature matches the closed form") {
  const QuadratureSolution sol = quadrature_radius(alpha12());
  const double shift = sol.s_of_r(0.8) - radius2_s(0.8, 0.0, -1);
  for (double r = 0.72; r <= 0.98; r += 0.02) CHECK(sol.s_of_r(r) == doctest::Approx(radius2_s(r, shift, -1)).epsilon(1e-9));
}

TEST_CASE("property: r_of_s inverts s_of_r") {
  Gen gen(41);
  for (const QuadratureParams& p : {alpha1(), alpha12(), wc1(1, -1, 0.5, 2), wc2(0, 2, 1, 0.5, 2)}) {
    const QuadratureSolution sol = quadrature_radius(p);
    for (int k = 0; k < 50; ++k) {
      const double r = gen.uniform(p.r_min, p.r_max);
      CHECK(sol.r_of_s(sol.s_of_r(r)) == doctest::Approx(r).epsilon(1e-10));
    }
  }
}

TEST_CASE("Weingarten quadratures agree with Simpson") {
  const QuadratureSolution one = weingarten_radius(wc1(0.5, -0.3, 0.5, 2));
  const double expected1 = simpson([](double r) { return std::sqrt((r + 0.5) / (r + 0.2)); }, 0.5, 2.0);
  CHECK(std::abs(one.s_of_r(2.0) - one.s_of_r(0.5)) == doctest::Approx(expected1).epsilon(1e-9));
  const QuadratureSolution two = weingarten_radius(wc2(-1, 1, 0.5, 0.5, 2));
  const double expected2 = simpson(
      [](double r) {
        const double D = r * r + r + 1;
        return std::sqrt(D / (D - 0.5));
      },
      0.5, 2.0);
  CHECK(std::abs(two.s_of_r(2.0) - two.s_of_r(0.5)) == doctest::Approx(expected2).epsilon(1e-9));
}

TEST_CASE("Weingarten profiles satisfy their relations") {
  // a K + b H = 1 with a = 0, b = 2 is H = 1/2
  const CanalSurface cmc = surface_of_revolution(weingarten_radius(wc2(0, 2, 1, 0.5, 2)).profile());
  for (const GridPoint& g : sample_grid(cmc.chart, {20, 6})) CHECK(std::abs(g.sample->H) == doctest::Approx(0.5).epsilon(1e-8));
  const QuadratureParams p = wc1(0, -0.5, 1, 2);
  const CanalSurface minimal = surface_of_revolution(weingarten_radius(p).profile());
  for (const GridPoint& g : sample_grid(minimal.chart, {20, 6})) {
    CHECK(std::abs(g.sample->H) < 1e-8);
    CHECK(g.sample->K == doctest::Approx(weingarten_gauss(p, minimal.radius.r(g.s))).epsilon(1e-7));
  }
}

TEST_CASE("translator residuals") {
  const CanalSurface t1 = surface_of_revolution(quadrature_radius(alpha1()).profile().restricted(0.0, 0.72));
  const TranslatorReport r1 = translator_residual(t1.chart, {1.0, Vec3::UnitZ()}, {60, 16});
  CHECK(r1.pass);
  CHECK(r1.max_abs < 1e-8);
  const TranslatorReport wrong = translator_residual(t1.chart, {1.0, Vec3::UnitX()}, {60, 16});
  CHECK_FALSE(wrong.pass);
  const CanalSurface t2 = surface_of_revolution(quadrature_radius(alpha12()).profile());
  CHECK(translator_residual(t2.chart, {-0.5, Vec3::UnitZ()}, {60, 16}).pass);
  CHECK_FALSE(translator_residual(shapes::sphere(1.0), {1.0, Vec3::UnitZ()}, {20, 16}).pass);
}

TEST_CASE("alpha = 1 translator has K = -r'") {
  const CanalSurface t1 = surface_of_revolution(quadrature_radius(alpha1()).profile().restricted(0.0, 0.72));
  for (double s : {0.0, 0.3, 0.7}) CHECK(curvature_sample(t1.chart, s, 0.4).K == doctest::Approx(-t1.radius.at(s).dr).epsilon(1e-9));
}

TEST_CASE("speed alignment and tube rings") {
  const CanalSurface t1 = surface_of_revolution(quadrature_radius(alpha1()).profile().restricted(0.0, 0.72));
  CHECK(speed_alignment_check(t1, {1.0, Vec3::UnitZ()}, {30, 16}).pass);
  const AlignmentReport off = speed_alignment_check(t1, {1.0, Vec3::UnitX()}, {30, 16});
  CHECK_FALSE(off.pass);
  CHECK(off.offending == "N");
  const CanalSurface tube = build_canal(make_spine(HelixSpec{1.0, 0.5, 3.0}), RadiusProfile::constant(0.3, 0.0, 3.0));
  Gen gen(42);
  for (int k = 0; k < 5; ++k) {
    const Vec3 w = Vec3(gen.normal(), gen.normal(), gen.normal()).normalized();
    CHECK(ring_residuals(tube, {1.0, w}, {20, 32}).min_ring_max > 0.1);
  }
}

TEST_CASE("property: isolated r'' solves the translator equation") {
  Gen gen(43);
  int done = 0;
  while (done < kalpha::testing::kCases) {
    const double alpha = std::vector<double>{1.0, -0.5, 2.0, 3.0}[gen.integer(0, 3)];
    const double r = gen.uniform(0.5, 2), dr = gen.uniform(-0.9, 0.9);
    const auto d2r = radius_second_derivative(alpha, r, dr);
    if (!d2r) continue;
    const double K = *d2r / (r * (r * *d2r - 1 + dr * dr));
    CHECK(std::pow(K, alpha) == doctest::Approx(-dr).epsilon(1e-9));
    ++done;
  }
  CHECK_FALSE(radius_second_derivative(0.5, 1.0, 0.3).has_value());
  CHECK(*curvature_from_slope(2.0, -0.25, -1.0) == doctest::Approx(-0.5));
  CHECK(*curvature_from_slope(2.0, -0.25, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("ODE reproduces the alpha = -1/2 closed form") {
  const double s0 = 0.3;
  // r' vanishes at s0, where K^(-1/2) = -r' loses its branch
  const RadiusProfile exact = radius2_profile(s0, 0.0, 0.6);
  const RadiusValue v = exact.at(0.0);
  const OdeSolution ode = solve_radius_ode(-0.5, v.r, v.dr, 0.0, 0.25);
  CHECK(ode.stop == OdeStop::ReachedEnd);
  for (double s = 0.0; s <= 0.25; s += 0.025) CHECK(ode.profile.r(s) == doctest::Approx(exact.r(s)).epsilon(1e-8));
}

TEST_CASE("ODE stops and throws on inadmissible data") {
  try {
    (void)solve_radius_ode(0.5, 1.0, 0.5, 0.0, 1.0);
    FAIL("expected NoRealBranch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoRealBranch);
  }
  // alpha = 1 from r = 1, r' = 1/2 runs into the slope limit before s = 5
  const OdeSolution run = solve_radius_ode(1.0, 1.0, -0.5, 0.0, 5.0);
  CHECK(run.stop != OdeStop::ReachedEnd);
  CHECK(run.s_stop < 5.0);
}

TEST_CASE("nonexistence witnesses and the fit") {
  const NonexistenceWitness w = weingarten_nonexistence_witness(weingarten_radius(wc1(1, -1, 0.5, 2)), 1.0);
  CHECK(w.confirmed);
  CHECK(w.min_abs >= 1e-3);
  std::vector<CurvaturePair> pairs;
  const CanalSurface cmc = surface_of_revolution(weingarten_radius(wc2(-1, 1, 0.5, 0.5, 2)).profile());
  for (const GridPoint& g : sample_grid(cmc.chart, {40, 4})) pairs.push_back({g.sample->K, g.sample->H});
  const WeingartenFit fit = fit_weingarten(pairs);
  CHECK(fit.rms_residual < 1e-8);
  // -K + H = 1, as a K + 2 b H + c with (a, b, c) proportional to (-1, 1/2, -1)
  const Eigen::Vector3d got(fit.coeffs.a, fit.coeffs.b, fit.coeffs.c), want = Eigen::Vector3d(-1, 0.5, -1).normalized();
  CHECK(std::abs(std::abs(got.dot(want)) - 1) < 1e-8);
}

TEST_CASE("parallel scan finds the sphere radius") {
  const std::vector<CurvaturePair> sphere(4, CurvaturePair{0.25, 0.5});
  const ParallelScan scan = parallel_scan(sphere, 1.0, 3.0, 5.0, 0.5, 1e-9);
  REQUIRE(scan.passing.size() >= 1);
  CHECK(scan.passing.front() == doctest::Approx(4.0));
}

TEST_CASE("bad quadrature data throws") {
  try {
    (void)quadrature_radius(wc2(1, 0, 1, 0.5, 2));  // D = r^2 - 1 changes sign
    FAIL("expected IntegrandDomainError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IntegrandDomainError);
  }
  CHECK_THROWS_AS(parse_family("alpha7"), Error);
  CHECK(parse_family("weingarten-WC2") == QuadratureFamily::WeingartenWC2);
}
