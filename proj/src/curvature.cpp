#include "kalpha/curvature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "kalpha/error.hpp"

namespace kalpha {

namespace {

Vec3 oriented_normal(const SurfaceChart& chart, const Vec3& xs, const Vec3& xt, double s,
                     double theta) {
  const Vec3 n = xs.cross(xt);
  const double norm = n.norm();
  const double threshold = kRegularityThreshold * chart.scale() * chart.scale();
  if (!(norm >= threshold)) {
    throw Error(ErrorCode::DegeneratePoint, "|X_s x X_theta| = " + std::to_string(norm) +
                                                " at (" + std::to_string(s) + ", " +
                                                std::to_string(theta) + ")");
  }
  return chart.normal_flipped() ? Vec3(-n / norm) : Vec3(n / norm);
}

}  // namespace

Vec3 unit_normal(const SurfaceChart& chart, double s, double theta) {
  const TangentJet t = chart.tangents(s, theta);
  if (!(t.xs.allFinite() && t.xt.allFinite())) {
    throw Error(ErrorCode::NonFiniteDerivative, "non-finite tangent at s = " + std::to_string(s));
  }
  return oriented_normal(chart, t.xs, t.xt, s, theta);
}

CurvatureSample curvature_sample(const SurfaceChart& chart, double s, double theta) {
  const ChartJet j = chart.jet(s, theta);
  CurvatureSample c;
  c.position = j.x;
  c.xs = j.xs;
  c.xt = j.xt;
  c.xss = j.xss;
  c.xst = j.xst;
  c.xtt = j.xtt;
  c.normal = oriented_normal(chart, j.xs, j.xt, s, theta);

  c.E = j.xs.dot(j.xs);
  c.F = j.xs.dot(j.xt);
  c.G = j.xt.dot(j.xt);
  c.e = j.xss.dot(c.normal);
  c.f = j.xst.dot(c.normal);
  c.g = j.xtt.dot(c.normal);

  const double det_I = c.E * c.G - c.F * c.F;
  c.K = (c.e * c.g - c.f * c.f) / det_I;
  c.H = (c.e * c.G - 2.0 * c.f * c.F + c.g * c.E) / (2.0 * det_I);
  const double disc = std::sqrt(std::max(c.H * c.H - c.K, 0.0));
  c.k1 = c.H + disc;
  c.k2 = c.H - disc;
  return c;
}

Eigen::Matrix2d shape_operator(const CurvatureSample& c) {
  Eigen::Matrix2d first, second;
  first << c.E, c.F, c.F, c.G;
  second << c.e, c.f, c.f, c.g;
  return first.inverse() * second;
}

void GridSpec::validate() const {
  if (n_s < 2 || n_theta < 2) {
    throw Error(ErrorCode::InvalidArgument, "grid needs at least 2x2 nodes, got " +
                                                std::to_string(n_s) + "x" +
                                                std::to_string(n_theta));
  }
}

std::pair<double, double> GridSpec::node(const ChartDomain& d, int i, int j) const {
  const double s = d.s_min + (d.s_max - d.s_min) * i / (n_s - 1);
  const double t = d.theta_min + (d.theta_max - d.theta_min) * j / (n_theta - 1);
  return {s, t};
}

std::vector<GridPoint> sample_grid(const SurfaceChart& chart, const GridSpec& grid,
                                   const SampleOptions& options) {
  grid.validate();
  std::vector<GridPoint> out;
  out.reserve(static_cast<std::size_t>(grid.n_s) * grid.n_theta);
  for (int i = 0; i < grid.n_s; ++i) {
    for (int j = 0; j < grid.n_theta; ++j) {
      GridPoint p;
      p.i = i;
      p.j = j;
      std::tie(p.s, p.theta) = grid.node(chart.domain(), i, j);
      try {
        p.sample = curvature_sample(chart, p.s, p.theta);
        p.flags.near_parabolic = std::abs(p.sample->K) <= options.parabolic_tolerance;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::DegeneratePoint) {
          p.flags.degenerate = true;
        } else if (e.code() == ErrorCode::NonFiniteDerivative) {
          p.flags.non_finite = true;
        } else {
          throw;
        }
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<CurvaturePair> curvature_pairs(const std::vector<GridPoint>& points) {
  std::vector<CurvaturePair> out;
  out.reserve(points.size());
  for (const GridPoint& p : points) {
    if (p.sample) out.push_back({p.sample->K, p.sample->H});
  }
  return out;
}

}  // namespace kalpha
