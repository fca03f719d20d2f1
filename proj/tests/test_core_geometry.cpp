#include <doctest.h>

#include <cmath>
#include <sstream>

#include "generators.hpp"
#include "kalpha/curvature.hpp"
#include "kalpha/error.hpp"
#include "kalpha/mesh.hpp"
#include "kalpha/shapes.hpp"
#include "kalpha/spine.hpp"

using namespace kalpha;
using kalpha::testing::Gen;

namespace {

// Monge patch formulas for z = f(s, t).
struct Monge {
  double K, H;
};

Monge monge(double a, double b, double c, double s, double t) {
  const double fs = 2 * a * s + b * t, ft = b * s + 2 * c * t;
  const double fss = 2 * a, fst = b, ftt = 2 * c;
  const double w = 1 + fs * fs + ft * ft;
  return {(fss * ftt - fst * fst) / (w * w),
          ((1 + ft * ft) * fss - 2 * fs * ft * fst + (1 + fs * fs) * ftt) / (2 * std::pow(w, 1.5))};
}

}  // namespace

TEST_CASE("sphere curvatures match 1/R") {
  for (double R : {0.5, 1.0, 2.0, 7.0}) {
    const SurfaceChart chart = shapes::sphere(R);
    for (const GridPoint& p : sample_grid(chart, {9, 9})) {
      REQUIRE(p.sample);
      CHECK(p.sample->K == doctest::Approx(1 / (R * R)).epsilon(1e-12));
      CHECK(p.sample->H == doctest::Approx(1 / R).epsilon(1e-12));
      // umbilic: sqrt(H^2 - K) amplifies rounding
      CHECK(p.sample->k1 == doctest::Approx(1 / R).epsilon(1e-7));
      CHECK(p.sample->k2 == doctest::Approx(1 / R).epsilon(1e-7));
    }
  }
}

TEST_CASE("plane and cylinder") {
  const CurvatureSample p = curvature_sample(shapes::plane(), 0.3, -0.2);
  CHECK(p.K == 0.0);
  CHECK(p.H == 0.0);
  const CurvatureSample c = curvature_sample(shapes::cylinder(0.4, 2.0), 0.5, 1.0);
  CHECK(std::abs(c.K) < 1e-14);
  CHECK(std::abs(c.H) == doctest::Approx(1 / 0.8));
}

TEST_CASE("property: quadric graphs agree with the Monge formulas") {
  Gen gen(11);
  for (int k = 0; k < kalpha::testing::kCases; ++k) {
    const double a = gen.uniform(-2, 2), b = gen.uniform(-2, 2), c = gen.uniform(-2, 2);
    const double s = gen.uniform(-0.9, 0.9), t = gen.uniform(-0.9, 0.9);
    const SurfaceChart chart = shapes::quadric_graph(a, b, c);
    const CurvatureSample x = curvature_sample(chart, s, t);
    const Monge m = monge(a, b, c, s, t);
    CHECK(x.K == doctest::Approx(m.K).epsilon(1e-9));
    CHECK(x.H == doctest::Approx(m.H).epsilon(1e-9));
  }
}

TEST_CASE("property: principal curvature relations") {
  Gen gen(12);
  for (int k = 0; k < kalpha::testing::kCases; ++k) {
    const SurfaceChart chart = shapes::quadric_graph(gen.uniform(-2, 2), gen.uniform(-2, 2), gen.uniform(-2, 2));
    const CurvatureSample x = curvature_sample(chart, gen.uniform(-1, 1), gen.uniform(-1, 1));
    CHECK(x.k1 >= x.k2);
    CHECK(x.k1 * x.k2 == doctest::Approx(x.K).epsilon(1e-9));
    CHECK((x.k1 + x.k2) / 2 == doctest::Approx(x.H).epsilon(1e-9));
    CHECK(x.H * x.H - x.K >= -1e-12);
    const Eigen::Matrix2d S = shape_operator(x);
    CHECK(S.determinant() == doctest::Approx(x.K).epsilon(1e-9));
    CHECK(S.trace() / 2 == doctest::Approx(x.H).epsilon(1e-9));
    CHECK(x.normal.norm() == doctest::Approx(1.0));
    CHECK(std::abs(x.normal.dot(x.xs)) < 1e-12);
  }
}

TEST_CASE("property: finite-difference view tracks the analytic jet") {
  Gen gen(13);
  for (int k = 0; k < 50; ++k) {
    const SurfaceChart chart = shapes::quadric_graph(gen.uniform(-1, 1), gen.uniform(-1, 1), gen.uniform(-1, 1));
    const double s = gen.uniform(-1, 1), t = gen.uniform(-1, 1);
    const CurvatureSample a = curvature_sample(chart, s, t);
    const CurvatureSample f = curvature_sample(chart.finite_difference_view(), s, t);
    CHECK(std::abs(a.K - f.K) < 1e-5);
    CHECK(std::abs(a.H - f.H) < 1e-5);
  }
}

TEST_CASE("catenoid is minimal and pseudosphere has K = -1") {
  for (double s : {-0.8, 0.0, 0.6}) {
    const CurvatureSample c = curvature_sample(shapes::catenoid(), s, 1.0);
    CHECK(std::abs(c.H) < 1e-12);
    CHECK(c.K == doctest::Approx(-1 / std::pow(std::cosh(s), 4)).epsilon(1e-12));
  }
  for (double u : {0.5, 1.0, 1.8}) {
    const CurvatureSample p = curvature_sample(shapes::pseudosphere(), u, 2.0);
    CHECK(p.K == doctest::Approx(-1.0).epsilon(1e-10));
  }
}

TEST_CASE("flipping the chart flips H and keeps K") {
  const SurfaceChart chart = shapes::quadric_graph(0.3, 0.1, -0.2);
  const CurvatureSample a = curvature_sample(chart, 0.2, 0.4);
  const CurvatureSample b = curvature_sample(chart.flipped(), 0.2, 0.4);
  CHECK(b.H == doctest::Approx(-a.H));
  CHECK(b.K == doctest::Approx(a.K));
}

TEST_CASE("degenerate points and bad grids throw") {
  const SurfaceChart pole = shapes::sphere(1.0, 0.0);
  try {
    (void)curvature_sample(pole, M_PI / 2, 0.3);
    FAIL("expected DegeneratePoint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegeneratePoint);
  }
  CHECK_THROWS_AS(GridSpec({1, 5}).validate(), Error);
  const auto points = sample_grid(pole, {5, 4});
  int flagged = 0;
  for (const GridPoint& p : points) flagged += p.flags.degenerate;
  CHECK(flagged == 8);
  CHECK(curvature_pairs(points).size() == 12);
}

TEST_CASE("helix frame, curvature and torsion") {
  const double a = 1.3, b = 0.4;
  const SpineCurve helix = make_spine(HelixSpec{a, b, 5.0});
  Gen gen(14);
  for (int k = 0; k < 50; ++k) {
    const SpineFrame f = helix.frame(gen.uniform(0, 5));
    CHECK(f.curvature == doctest::Approx(a / (a * a + b * b)));
    CHECK(f.torsion == doctest::Approx(b / (a * a + b * b)));
    CHECK(f.T.norm() == doctest::Approx(1.0));
    CHECK(std::abs(f.T.dot(f.N)) < 1e-12);
    CHECK((f.T.cross(f.N) - f.B).norm() < 1e-12);
  }
}

TEST_CASE("general curve spine agrees with the helix closed form") {
  const double a = 1.0, b = 0.5;
  const SpineCurve closed = make_spine(HelixSpec{a, b, 3.0});
  const SpineCurve general = make_spine(CurveSpec{
      [=](double t) { return Vec3(a * std::cos(t), a * std::sin(t), b * t); }, 0.0, 3.0 / std::sqrt(a * a + b * b)});
  CHECK(general.length() == doctest::Approx(3.0).epsilon(1e-8));
  for (double s : {0.5, 1.5, 2.5}) {
    const SpineFrame x = closed.frame(s), y = general.frame(s);
    CHECK((x.point - y.point).norm() < 1e-6);
    CHECK((x.N - y.N).norm() < 1e-5);
    CHECK(y.curvature == doctest::Approx(x.curvature).epsilon(1e-5));
    CHECK(y.torsion == doctest::Approx(x.torsion).epsilon(1e-4));
  }
}

TEST_CASE("line frames must be orthonormal") {
  LineSpec bad;
  bad.N = Vec3(1, 1, 0);
  CHECK_THROWS_AS(make_spine(bad), Error);
  const SpineCurve line = make_spine(LineSpec{});
  CHECK(line.straight());
  CHECK(line.frame(0.4).curvature == 0.0);
}

TEST_CASE("mesh export") {
  const Mesh m = mesh_chart(shapes::sphere(1.0), {6, 8});
  CHECK(!m.faces.empty());
  for (const auto& f : m.faces)
    for (int v : f) CHECK((v >= 0 && v < static_cast<int>(m.vertices.size())));
  const std::string obj = to_obj(m);
  std::istringstream in(obj);
  std::string line;
  std::size_t v = 0, f = 0;
  while (std::getline(in, line)) {
    v += line.rfind("v ", 0) == 0;
    f += line.rfind("f ", 0) == 0;
  }
  CHECK(v == m.vertices.size());
  CHECK(f == m.faces.size());
  CHECK(scalars_csv(m).rfind("vertex,s,theta", 0) == 0);
}

TEST_CASE("format_real round-trips") {
  Gen gen(15);
  for (int k = 0; k < kalpha::testing::kCases; ++k) {
    const double x = gen.normal() * std::pow(10.0, gen.integer(-12, 12));
    CHECK(std::stod(format_real(x)) == x);
  }
}
