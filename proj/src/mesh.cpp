#include "kalpha/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "kalpha/error.hpp"

namespace kalpha {

void Mesh::add_scalar(std::string name, std::vector<double> values) {
  if (values.size() != vertices.size()) {
    throw Error(ErrorCode::InvalidArgument, "scalar field '" + name + "' has the wrong length");
  }
  scalar_names.push_back(std::move(name));
  scalars.push_back(std::move(values));
}

Mesh mesh_chart(const SurfaceChart& chart, const GridSpec& grid) {
  grid.validate();
  const ChartDomain& domain = chart.domain();
  const int rows = grid.n_s;
  const int cols = domain.periodic_theta ? grid.n_theta - 1 : grid.n_theta;
  if (cols < 2) throw Error(ErrorCode::InvalidArgument, "periodic meshes need n_theta >= 3");

  Mesh mesh;
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity()), hi = -lo;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const auto [s, theta] = grid.node(domain, i, j);
      const Vec3 p = chart.point(s, theta);
      if (!p.allFinite()) {
        throw Error(ErrorCode::NonFiniteDerivative, "non-finite vertex at s = " + format_real(s) +
                                                        ", theta = " + format_real(theta));
      }
      mesh.vertices.push_back(p);
      mesh.params.emplace_back(s, theta);
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
  }
  const double min_area = 1e-14 * (hi - lo).squaredNorm();
  auto index = [&](int i, int j) { return i * cols + (j % cols); };
  auto add = [&](int a, int b, int c) {
    const Vec3& pa = mesh.vertices[a];
    const double area = 0.5 * (mesh.vertices[b] - pa).cross(mesh.vertices[c] - pa).norm();
    if (area > min_area) mesh.faces.push_back({a, b, c});
  };
  const int last_col = domain.periodic_theta ? cols : cols - 1;
  for (int i = 0; i + 1 < rows; ++i) {
    for (int j = 0; j < last_col; ++j) {
      const int a = index(i, j), b = index(i + 1, j), c = index(i + 1, j + 1), d = index(i, j + 1);
      add(a, b, c);
      add(a, c, d);
    }
  }
  return mesh;
}

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string to_obj(const Mesh& mesh) {
  std::ostringstream out;
  for (const Vec3& v : mesh.vertices) {
    out << "v " << format_real(v.x()) << ' ' << format_real(v.y()) << ' ' << format_real(v.z()) << '\n';
  }
  for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  return out.str();
}

std::string scalars_csv(const Mesh& mesh) {
  std::ostringstream out;
  out << "vertex,s,theta";
  for (const auto& name : mesh.scalar_names) out << ',' << name;
  out << '\n';
  for (std::size_t k = 0; k < mesh.vertices.size(); ++k) {
    out << k + 1;
    if (k < mesh.params.size()) out << ',' << format_real(mesh.params[k].first) << ',' << format_real(mesh.params[k].second);
    for (const auto& column : mesh.scalars) out << ',' << format_real(column[k]);
    out << '\n';
  }
  return out.str();
}

}  // namespace kalpha
