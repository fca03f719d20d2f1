#include "kalpha/flow.hpp"

#include <boost/math/interpolators/makima.hpp>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kalpha/error.hpp"
#include "kalpha/translator.hpp"

namespace kalpha {

namespace {

struct NodeDerivatives {
  double drho, dz, d2rho, d2z;
};

// Index-parameter differences with quadratically extrapolated ghost nodes.
NodeDerivatives derivatives(const ProfileState& p, int i) {
  const int n = p.size();
  auto at = [&](const std::vector<double>& v, int k) {
    if (k < 0) return 3 * v[0] - 3 * v[1] + v[2];
    if (k >= n) return 3 * v[n - 1] - 3 * v[n - 2] + v[n - 3];
    return v[k];
  };
  const double rp = at(p.rho, i + 1), rm = at(p.rho, i - 1);
  const double zp = at(p.z, i + 1), zm = at(p.z, i - 1);
  return {(rp - rm) / 2, (zp - zm) / 2, rp - 2 * p.rho[i] + rm, zp - 2 * p.z[i] + zm};
}

void check_profile(const ProfileState& p) {
  if (p.rho.size() != p.z.size()) throw Error(ErrorCode::InvalidArgument, "rho and z differ in length");
  if (p.size() < 6) throw Error(ErrorCode::InvalidArgument, "profile needs at least 6 nodes");
  for (double r : p.rho) {
    if (!(r > 0)) throw Error(ErrorCode::InvalidArgument, "profile must stay off the axis");
  }
}

double segment_distance(double px, double pz, double ax, double az, double bx, double bz) {
  const double vx = bx - ax, vz = bz - az;
  const double len2 = vx * vx + vz * vz;
  double t = len2 > 0 ? ((px - ax) * vx + (pz - az) * vz) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - ax - t * vx, pz - az - t * vz);
}

double polyline_distance(double px, double pz, const ProfileState& curve, double shift) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k + 1 < curve.size(); ++k) {
    best = std::min(best, segment_distance(px, pz, curve.rho[k], curve.z[k] + shift, curve.rho[k + 1],
                                           curve.z[k + 1] + shift));
  }
  return best;
}

std::pair<int, int> interior(int n, double fraction) {
  const double margin = 0.5 * (1 - fraction) * (n - 1);
  return {static_cast<int>(std::ceil(margin)), static_cast<int>(std::floor(n - 1 - margin))};
}

}  // namespace

ProfileCurvature profile_curvature(const ProfileState& state) {
  check_profile(state);
  const int n = state.size();
  ProfileCurvature c;
  c.meridian.resize(n);
  c.parallel.resize(n);
  c.K.resize(n);
  for (int i = 0; i < n; ++i) {
    const NodeDerivatives d = derivatives(state, i);
    const double L = std::hypot(d.drho, d.dz);
    c.meridian[i] = (d.d2rho * d.dz - d.d2z * d.drho) / (L * L * L);
    c.parallel[i] = -d.dz / (state.rho[i] * L);
    c.K[i] = c.meridian[i] * c.parallel[i];
  }
  return c;
}

ProfileState flow_step(const ProfileState& state, double alpha, double dt, double step_fraction,
                       const StepBoundary& boundary) {
  check_profile(state);
  if (dt < 0) throw Error(ErrorCode::InvalidArgument, "time step must be nonnegative");
  if (alpha == 0) throw Error(ErrorCode::InvalidArgument, "alpha must be nonzero");
  if (dt == 0) return state;
  const int n = state.size();

  std::vector<double> speed(n), coeff(n, 0.0), nrho(n), nz(n);
  double max_speed = 0, min_spacing = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const NodeDerivatives d = derivatives(state, i);
    const double L = std::hypot(d.drho, d.dz);
    const double km = (d.d2rho * d.dz - d.d2z * d.drho) / (L * L * L);
    const double kp = -d.dz / (state.rho[i] * L);
    const double K = km * kp;
    const auto power = real_power(K, alpha);
    if (!power) {
      throw Error(ErrorCode::ConvexityLoss, "K = " + std::to_string(K) + " at node " + std::to_string(i));
    }
    speed[i] = *power;
    max_speed = std::max(max_speed, std::abs(*power));
    nrho[i] = d.dz / L;
    nz[i] = -d.drho / L;
    // Leading-order change of K^alpha under a normal displacement delta: alpha K^(alpha-1) k_p delta_ss.
    const double a = dt * alpha * *power / K * kp / (L * L);
    if (std::isfinite(a) && a < 0) coeff[i] = a;
    if (i + 1 < n) {
      min_spacing = std::min(min_spacing, std::hypot(state.rho[i + 1] - state.rho[i],
                                                     state.z[i + 1] - state.z[i]));
    }
  }
  if (dt * max_speed > step_fraction * min_spacing) {
    throw Error(ErrorCode::StepTooLarge, "dt max|K^alpha| = " + std::to_string(dt * max_speed) +
                                             " exceeds " + std::to_string(step_fraction) +
                                             " of the node spacing " + std::to_string(min_spacing));
  }

  // delta_i + a_i (delta_{i+1} - 2 delta_i + delta_{i-1}) = -dt K^alpha on the unknown nodes.
  std::vector<double> delta(n, 0.0);
  const bool translate = boundary.policy == BoundaryPolicy::Translate;
  int first, last;
  if (translate) {
    delta[0] = dt * boundary.drift * nz[0];
    delta[n - 1] = dt * boundary.drift * nz[n - 1];
    first = 1;
    last = n - 2;
  } else {
    // nodes 1 and n-2 explicit, ends extrapolated linearly afterwards
    delta[1] = -dt * speed[1];
    delta[n - 2] = -dt * speed[n - 2];
    first = 2;
    last = n - 3;
  }
  const int m = last - first + 1;
  std::vector<double> lower(m), diag(m), upper(m), rhs(m);
  for (int k = 0; k < m; ++k) {
    const int i = k + first;
    lower[k] = coeff[i];
    upper[k] = coeff[i];
    diag[k] = 1 - 2 * coeff[i];
    rhs[k] = -dt * speed[i];
  }
  rhs[0] -= lower[0] * delta[first - 1];
  rhs[m - 1] -= upper[m - 1] * delta[last + 1];
  for (int k = 1; k < m; ++k) {
    const double factor = lower[k] / diag[k - 1];
    diag[k] -= factor * upper[k - 1];
    rhs[k] -= factor * rhs[k - 1];
  }
  delta[last] = rhs[m - 1] / diag[m - 1];
  for (int k = m - 2; k >= 0; --k) delta[k + first] = (rhs[k] - upper[k] * delta[k + first + 1]) / diag[k];
  if (!translate) {
    delta[0] = 2 * delta[1] - delta[2];
    delta[n - 1] = 2 * delta[n - 2] - delta[n - 3];
  }

  ProfileState next = state;
  next.t = state.t + dt;
  for (int i = 0; i < n; ++i) {
    if (translate && (i == 0 || i == n - 1)) {
      next.z[i] += dt * boundary.drift;
      continue;
    }
    next.rho[i] += delta[i] * nrho[i];
    next.z[i] += delta[i] * nz[i];
    if (translate) {
      // tangential part of the rigid motion keeps nodes attached to the ends
      const double tr = -nz[i], tz = nrho[i];
      next.rho[i] += dt * boundary.drift * tz * tr;
      next.z[i] += dt * boundary.drift * tz * tz;
    }
    if (!(next.rho[i] > 0)) throw Error(ErrorCode::StepTooLarge, "node " + std::to_string(i) + " crossed the axis");
  }
  for (int i = 0; i + 1 < n; ++i) {
    const double before = (state.rho[i + 1] - state.rho[i]) * (next.rho[i + 1] - next.rho[i]) +
                          (state.z[i + 1] - state.z[i]) * (next.z[i + 1] - next.z[i]);
    if (!(before > 0)) throw Error(ErrorCode::StepTooLarge, "node order broke at " + std::to_string(i));
  }
  return next;
}

ProfileState renode(const ProfileState& state, int nodes) {
  check_profile(state);
  if (nodes < 6) throw Error(ErrorCode::InvalidArgument, "need at least 6 nodes");
  const int n = state.size();
  std::vector<double> sigma(n, 0.0);
  for (int i = 1; i < n; ++i) {
    sigma[i] = sigma[i - 1] + std::hypot(state.rho[i] - state.rho[i - 1], state.z[i] - state.z[i - 1]);
  }
  using boost::math::interpolators::makima;
  auto rho = makima(std::vector<double>(sigma), std::vector<double>(state.rho));
  auto z = makima(std::vector<double>(sigma), std::vector<double>(state.z));
  ProfileState out;
  out.t = state.t;
  out.rho.resize(nodes);
  out.z.resize(nodes);
  const double total = sigma.back();
  for (int k = 0; k < nodes; ++k) {
    const double s = k == nodes - 1 ? total : total * k / (nodes - 1);
    out.rho[k] = rho(s);
    out.z[k] = z(s);
  }
  return out;
}

FlowResult run_flow(const ProfileState& initial, const FlowOptions& options) {
  check_profile(initial);
  if (!(options.dt > 0)) throw Error(ErrorCode::InvalidArgument, "time step must be positive");
  if (options.horizon < 0) throw Error(ErrorCode::InvalidArgument, "horizon must be nonnegative");
  if (options.renode_every < 1) throw Error(ErrorCode::InvalidArgument, "renode interval must be positive");

  std::vector<double> times = options.snapshot_times;
  times.push_back(options.horizon);
  for (double t : times) {
    if (t < 0 || t > options.horizon) throw Error(ErrorCode::InvalidArgument, "snapshot outside [0, horizon]");
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  const int total = static_cast<int>(std::lround(options.horizon / options.dt));
  FlowResult result;
  ProfileState state = initial;
  std::size_t next = 0;
  auto record = [&](int step) {
    while (next < times.size() && std::lround(times[next] / options.dt) == step) {
      FlowSnapshot snap{state, translation_deviation(state, initial, options.drift * state.t,
                                                     options.interior_fraction)};
      result.snapshots.push_back(std::move(snap));
      ++next;
    }
  };
  record(0);
  for (int k = 1; k <= total; ++k) {
    state = flow_step(state, options.alpha, options.dt, options.step_fraction,
                      {options.boundary, options.drift});
    state.t = k * options.dt;
    if (k % options.renode_every == 0) state = renode(state, state.size());
    record(k);
  }
  result.steps = total;
  return result;
}

double translation_deviation(const ProfileState& evolved, const ProfileState& initial, double shift_z,
                             double interior_fraction) {
  check_profile(evolved);
  check_profile(initial);
  double worst = 0;
  const auto [e0, e1] = interior(evolved.size(), interior_fraction);
  for (int i = e0; i <= e1; ++i) {
    worst = std::max(worst, polyline_distance(evolved.rho[i], evolved.z[i], initial, shift_z));
  }
  const auto [i0, i1] = interior(initial.size(), interior_fraction);
  for (int i = i0; i <= i1; ++i) {
    worst = std::max(worst, polyline_distance(initial.rho[i], initial.z[i] + shift_z, evolved, 0.0));
  }
  return worst;
}

ProfileState profile_from_radius(const RadiusProfile& radius, int nodes) {
  const int dense = std::max(4 * nodes, 64);
  ProfileState p;
  p.rho.resize(dense);
  p.z.resize(dense);
  const double s0 = radius.s_begin(), s1 = radius.s_end();
  for (int k = 0; k < dense; ++k) {
    const double s = s0 + (s1 - s0) * k / (dense - 1);
    const RadiusValue v = radius.at(s);
    const double sin_phi = std::sqrt(std::max(0.0, 1 - v.dr * v.dr));
    p.rho[k] = v.r * sin_phi;
    p.z[k] = -v.r * v.dr + s;
  }
  // Orient so that (z', -rho') agrees with the sphere-radial normal (sin phi, cos phi).
  const int mid = dense / 2;
  const RadiusValue v = radius.at(s0 + (s1 - s0) * mid / (dense - 1));
  const double drho = p.rho[mid + 1] - p.rho[mid - 1], dz = p.z[mid + 1] - p.z[mid - 1];
  if (dz * std::sqrt(std::max(0.0, 1 - v.dr * v.dr)) - drho * (-v.dr) < 0) {
    std::reverse(p.rho.begin(), p.rho.end());
    std::reverse(p.z.begin(), p.z.end());
  }
  return renode(p, nodes);
}

ProfileState sphere_profile(double R, int nodes, double margin) {
  return ellipse_profile(R, R, nodes, margin);
}

ProfileState ellipse_profile(double a, double b, int nodes, double margin) {
  if (!(a > 0) || !(b > 0)) throw Error(ErrorCode::InvalidArgument, "semi-axes must be positive");
  if (!(margin > 0) || !(margin < std::numbers::pi / 2)) {
    throw Error(ErrorCode::InvalidArgument, "margin must lie in (0, pi/2)");
  }
  const int dense = std::max(4 * nodes, 64);
  ProfileState p;
  p.rho.resize(dense);
  p.z.resize(dense);
  for (int k = 0; k < dense; ++k) {
    const double u = margin + (std::numbers::pi - 2 * margin) * k / (dense - 1);
    p.rho[k] = a * std::sin(u);
    p.z[k] = -b * std::cos(u);
  }
  return renode(p, nodes);
}

double fit_axis_circle(const ProfileState& state, double interior_fraction) {
  check_profile(state);
  const auto [i0, i1] = interior(state.size(), interior_fraction);
  const int m = i1 - i0 + 1;
  Eigen::MatrixX2d A(m, 2);
  Eigen::VectorXd b(m);
  for (int k = 0; k < m; ++k) {
    const double r = state.rho[i0 + k], z = state.z[i0 + k];
    A.row(k) << 2 * z, 1.0;
    b[k] = r * r + z * z;
  }
  const Eigen::Vector2d x = A.colPivHouseholderQr().solve(b);
  return std::sqrt(x[1] + x[0] * x[0]);
}

}  // namespace kalpha
