#pragma once

#include <array>
#include <string>
#include <vector>

#include "kalpha/curvature.hpp"
#include "kalpha/surface_chart.hpp"

namespace kalpha {

/// Triangle mesh with optional per-vertex scalar fields.
struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;  // zero-based
  std::vector<std::string> scalar_names;
  std::vector<std::vector<double>> scalars;  // one column per name, one value per vertex
  std::vector<std::pair<double, double>> params;  // (s, theta) of each vertex

  void add_scalar(std::string name, std::vector<double> values);
};

/// Grid triangulation of a chart; periodic theta wraps instead of duplicating the seam.
/// Faces with area <= 1e-14 bbox_diagonal^2 are dropped; non-finite vertices throw NonFiniteDerivative.
Mesh mesh_chart(const SurfaceChart& chart, const GridSpec& grid);

/// Shortest round-trip decimal with 17 significant digits.
std::string format_real(double value);

/// "v x y z" and "f i j k" lines, one-based indices.
std::string to_obj(const Mesh& mesh);

/// Header "vertex,s,theta,<names>" and one row per vertex.
std::string scalars_csv(const Mesh& mesh);

}  // namespace kalpha
