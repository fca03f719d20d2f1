#pragma once

#include <vector>

#include "kalpha/radius_profile.hpp"

namespace kalpha {

/// Meridian curve (rho(u), z(u)) of a surface of revolution about the z-axis.
/// Nodes run so that (z', -rho') points away from the enclosed region.
struct ProfileState {
  std::vector<double> rho;
  std::vector<double> z;
  double t = 0;

  [[nodiscard]] int size() const { return static_cast<int>(rho.size()); }
};

/// Curvature data at the nodes of a profile.
struct ProfileCurvature {
  std::vector<double> meridian;  // k_m = (rho'' z' - z'' rho') / L^3
  std::vector<double> parallel;  // k_p = -z' / (rho L)
  std::vector<double> K;         // k_m k_p
};

ProfileCurvature profile_curvature(const ProfileState& state);

/// How the two end nodes move.
enum class BoundaryPolicy {
  Extrapolate,  // normal displacement extrapolated linearly from the neighbours
  Translate,    // ends move rigidly with velocity (0, drift)
};

struct StepBoundary {
  BoundaryPolicy policy = BoundaryPolicy::Extrapolate;
  double drift = -1.0;
};

/// One linearly implicit Euler step of d/dt X = -K^alpha U (U outward).
/// Throws ConvexityLoss when K <= 0 at an interior node and K^alpha is not real,
/// and StepTooLarge when dt max|K^alpha| exceeds `step_fraction` of the smallest node spacing
/// or the node order breaks.
ProfileState flow_step(const ProfileState& state, double alpha, double dt, double step_fraction = 0.2,
                       const StepBoundary& boundary = {});

/// Resamples uniformly in arc length, keeping the endpoints.
ProfileState renode(const ProfileState& state, int nodes);

struct FlowOptions {
  double alpha = 1.0;
  double dt = 1e-4;
  double horizon = 0.0;
  int renode_every = 50;
  double step_fraction = 0.2;
  /// z-velocity of the rigid translate the evolved profile is compared with.
  double drift = -1.0;
  BoundaryPolicy boundary = BoundaryPolicy::Extrapolate;
  double interior_fraction = 0.8;
  std::vector<double> snapshot_times;  // horizon is always included
};

struct FlowSnapshot {
  ProfileState state;
  double deviation = 0;
};

struct FlowResult {
  std::vector<FlowSnapshot> snapshots;  // time-ordered
  int steps = 0;
  [[nodiscard]] double final_deviation() const { return snapshots.back().deviation; }
};

FlowResult run_flow(const ProfileState& initial, const FlowOptions& options);

/// Symmetric nearest-point distance between the interior parts of `evolved`
/// and `initial` shifted by `shift_z`.
double translation_deviation(const ProfileState& evolved, const ProfileState& initial,
                             double shift_z, double interior_fraction = 0.8);

/// rho = r sin(phi), z = r cos(phi) + s over the profile interval, resampled to `nodes` points.
ProfileState profile_from_radius(const RadiusProfile& radius, int nodes);

/// Circle of radius R about the origin between polar angles margin and pi - margin.
ProfileState sphere_profile(double R, int nodes, double margin = 0.3);

/// Half ellipse rho = a sin u, z = -b cos u between margin and pi - margin.
ProfileState ellipse_profile(double a, double b, int nodes, double margin = 0.3);

/// Radius of the least-squares circle centred on the z-axis through the interior nodes.
double fit_axis_circle(const ProfileState& state, double interior_fraction = 0.8);

}  // namespace kalpha
