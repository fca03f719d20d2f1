#include "kalpha/cli.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "kalpha/error.hpp"
#include "kalpha/mesh.hpp"
#include "kalpha/quadrature.hpp"
#include "witness.hpp"

namespace kalpha::cli {

namespace {

namespace fs = std::filesystem;

struct Args {
  std::string config_path;
  std::string out_dir;
  std::optional<double> tolerance;
  std::string grid;
  std::uint64_t seed = 1;
  std::string witness_id;
  bool list = false;
};

struct Context {
  Args args;
  Json config;
  std::ostream& out;
  std::shared_ptr<spdlog::logger> log;

  [[nodiscard]] fs::path out_dir() const { return args.out_dir.empty() ? fs::path(".") : fs::path(args.out_dir); }
  [[nodiscard]] GridSpec grid(GridSpec fallback) const {
    if (!args.grid.empty()) return parse_grid(args.grid);
    return config_grid(config, fallback);
  }
  [[nodiscard]] double tolerance(double fallback) const {
    if (args.tolerance) return *args.tolerance;
    return number_or(config, "tolerance", fallback, "config");
  }
};

std::string fmt(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", value);
  return buf;
}

// temp file + rename
void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::ConfigError, "cannot write " + tmp.string());
    f << content;
    if (!f) throw Error(ErrorCode::ConfigError, "cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::ConfigError, "cannot read config '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void require_config(const Context& ctx) {
  if (ctx.config.is_null()) throw Error(ErrorCode::ConfigError, "this command needs --config");
}

std::string join(std::initializer_list<std::string> parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : ",") + p;
  return out;
}

int cmd_curvature(Context& ctx) {
  require_config(ctx);
  const BuiltSurface surface = build_surface(object(ctx.config, "surface", "config"), "surface");
  const GridSpec grid = ctx.grid({50, 32});
  const bool canal = surface.canal.has_value();
  std::string csv = canal ? "s,theta,K,H,k1,k2,r,dr\n" : "s,theta,K,H,k1,k2\n";
  int degenerate = 0;
  for (const GridPoint& p : sample_grid(surface.chart, grid)) {
    std::string row = format_real(p.s) + "," + format_real(p.theta);
    if (p.sample) {
      const CurvatureSample& c = *p.sample;
      row += "," + join({format_real(c.K), format_real(c.H), format_real(c.k1), format_real(c.k2)});
    } else {
      ++degenerate;
      row += ",nan,nan,nan,nan";
    }
    if (canal) {
      const RadiusValue v = surface.canal->radius.at(p.s);
      row += "," + format_real(v.r) + "," + format_real(v.dr);
    }
    csv += row + "\n";
  }
  const fs::path path = ctx.out_dir() / "curvature.csv";
  write_atomic(path, csv);
  ctx.out << "curvature " << surface.kind << " grid " << grid.n_s << "x" << grid.n_theta << "\n"
          << "rows " << grid.n_s * grid.n_theta << "\n"
          << "degenerate " << degenerate << "\n";
  ctx.log->info("wrote {}", path.string());
  return kExitPass;
}

int cmd_translator(Context& ctx) {
  require_config(ctx);
  const BuiltSurface surface = build_surface(object(ctx.config, "surface", "config"), "surface");
  const TranslatorSpec spec = build_translator(object(ctx.config, "translator", "config"));
  const GridSpec grid = ctx.grid({100, 32});
  const TranslatorReport rep = translator_residual(surface.chart, spec, grid, ctx.tolerance(1e-6));
  std::ostringstream text;
  text << "translator " << surface.kind << "\n"
       << "  alpha = " << fmt(spec.alpha) << "\n"
       << "  w = " << fmt(spec.w.x()) << " " << fmt(spec.w.y()) << " " << fmt(spec.w.z()) << "\n"
       << "  grid = " << grid.n_s << "x" << grid.n_theta << "\n"
       << "  evaluated = " << rep.evaluated << "\n"
       << "  skipped_degenerate = " << rep.skipped_degenerate << "\n"
       << "  skipped_parabolic = " << rep.skipped_parabolic << "\n"
       << "  skipped_complex = " << rep.skipped_complex << "\n"
       << "  skipped_fraction = " << fmt(rep.skipped_fraction()) << "\n"
       << "  orientation = " << rep.orientation << "\n"
       << "  max_abs_residual = " << fmt(rep.max_abs) << "\n"
       << "  mean_abs_residual = " << fmt(rep.mean_abs) << "\n"
       << "  tolerance = " << fmt(rep.tolerance) << "\n";
  if (surface.canal) {
    const AlignmentReport a = speed_alignment_check(*surface.canal, spec, grid);
    text << "  alignment_max_w2 = " << fmt(a.max_w2) << "\n"
         << "  alignment_max_w3 = " << fmt(a.max_w3) << "\n"
         << "  alignment_offending = " << (a.offending.empty() ? "none" : a.offending) << "\n";
  }
  text << "verdict " << (rep.pass ? "PASS" : "FAIL") << "\n";
  ctx.out << text.str();
  if (!ctx.args.out_dir.empty()) {
    Json j{{"surface", surface.kind},
           {"alpha", spec.alpha},
           {"w", {spec.w.x(), spec.w.y(), spec.w.z()}},
           {"grid", {grid.n_s, grid.n_theta}},
           {"evaluated", rep.evaluated},
           {"skipped_fraction", rep.skipped_fraction()},
           {"orientation", rep.orientation},
           {"max_abs_residual", rep.max_abs},
           {"mean_abs_residual", rep.mean_abs},
           {"tolerance", rep.tolerance},
           {"pass", rep.pass}};
    write_atomic(ctx.out_dir() / "translator.json", j.dump(2) + "\n");
  }
  return rep.pass ? kExitPass : kExitFail;
}

Mesh surface_mesh(const SurfaceChart& chart, const GridSpec& grid, const std::optional<TranslatorSpec>& spec) {
  Mesh mesh = mesh_chart(chart, grid);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> K(mesh.vertices.size(), nan), H = K, residual = K;
  for (std::size_t k = 0; k < mesh.vertices.size(); ++k) {
    const auto [s, t] = mesh.params[k];
    try {
      const CurvatureSample c = curvature_sample(chart, s, t);
      K[k] = c.K;
      H[k] = c.H;
      if (spec) {
        if (const auto power = real_power(c.K, spec->alpha)) residual[k] = *power - c.normal.dot(spec->w);
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegeneratePoint && e.code() != ErrorCode::NonFiniteDerivative) throw;
    }
  }
  mesh.add_scalar("K", std::move(K));
  mesh.add_scalar("H", std::move(H));
  if (spec) mesh.add_scalar("residual", std::move(residual));
  return mesh;
}

void write_mesh(Context& ctx, const Mesh& mesh, const std::string& stem) {
  write_atomic(ctx.out_dir() / (stem + ".obj"), to_obj(mesh));
  write_atomic(ctx.out_dir() / (stem + ".csv"), scalars_csv(mesh));
  ctx.out << "mesh " << stem << ".obj vertices " << mesh.vertices.size() << " faces " << mesh.faces.size() << "\n";
}

int cmd_solve(Context& ctx) {
  require_config(ctx);
  const Json& spec = object(ctx.config, "radius", "config");
  const RadiusProfile radius = build_radius(spec, "radius");
  const int rows = ctx.grid({201, 32}).n_s;
  std::string csv = "s,r,dr\n";
  double r_lo = std::numeric_limits<double>::infinity(), r_hi = -r_lo;
  for (int k = 0; k < rows; ++k) {
    const double s = k == rows - 1 ? radius.s_end()
                                   : radius.s_begin() + (radius.s_end() - radius.s_begin()) * k / (rows - 1);
    const RadiusValue v = radius.at(s);
    r_lo = std::min(r_lo, v.r);
    r_hi = std::max(r_hi, v.r);
    csv += format_real(s) + "," + format_real(v.r) + "," + format_real(v.dr) + "\n";
  }
  write_atomic(ctx.out_dir() / "profile.csv", csv);
  ctx.out << "solve " << text(spec, "type", "radius") << "\n"
          << "  s_begin = " << fmt(radius.s_begin()) << "\n"
          << "  s_end = " << fmt(radius.s_end()) << "\n"
          << "  r_min = " << fmt(r_lo) << "\n"
          << "  r_max = " << fmt(r_hi) << "\n"
          << "  rows = " << rows << "\n";
  if (ctx.config.contains("mesh")) {
    const CanalSurface surface = surface_of_revolution(radius.trimmed());
    std::optional<TranslatorSpec> t;
    if (ctx.config.contains("translator")) t = build_translator(ctx.config.at("translator"));
    write_mesh(ctx, surface_mesh(surface.chart, config_grid(Json{{"grid", ctx.config.at("mesh")}}, {64, 48}), t),
               "surface");
  }
  return kExitPass;
}

// least-squares slope of y against x
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int cmd_flow(Context& ctx) {
  require_config(ctx);
  const FlowConfig flow = build_flow(object(ctx.config, "flow", "config"));
  const FlowResult result = run_flow(flow.initial, flow.options);
  std::string csv = "t,u,rho,z\n";
  for (const FlowSnapshot& snap : result.snapshots) {
    const int n = snap.state.size();
    for (int i = 0; i < n; ++i) {
      csv += format_real(snap.state.t) + "," + format_real(static_cast<double>(i) / (n - 1)) + "," +
             format_real(snap.state.rho[i]) + "," + format_real(snap.state.z[i]) + "\n";
    }
  }
  write_atomic(ctx.out_dir() / "flow.csv", csv);

  ctx.out << "flow " << flow.initial_kind << "\n"
          << "  alpha = " << fmt(flow.options.alpha) << "\n"
          << "  dt = " << fmt(flow.options.dt) << "\n"
          << "  horizon = " << fmt(flow.options.horizon) << "\n"
          << "  nodes = " << flow.initial.size() << "\n"
          << "  steps = " << result.steps << "\n";
  std::vector<double> times, cubes;
  for (const FlowSnapshot& snap : result.snapshots) {
    ctx.out << "  t = " << fmt(snap.state.t) << " deviation = " << fmt(snap.deviation);
    if (flow.initial_kind == "sphere") {
      const double R = fit_axis_circle(snap.state, flow.options.interior_fraction);
      times.push_back(snap.state.t);
      cubes.push_back(R * R * R);
      ctx.out << " radius = " << fmt(R);
    }
    ctx.out << "\n";
  }
  if (times.size() >= 2) ctx.out << "  cube_radius_slope = " << fmt(slope(times, cubes)) << "\n";

  const std::optional<double> bound = ctx.args.tolerance ? ctx.args.tolerance : flow.max_deviation;
  if (!bound) return kExitPass;
  const bool pass = result.final_deviation() <= *bound;
  ctx.out << "  max_deviation = " << fmt(*bound) << "\n"
          << "verdict " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitPass : kExitFail;
}

int cmd_witness(Context& ctx) {
  if (ctx.args.list) {
    for (const std::string& id : witness_ids()) ctx.out << id << "\n";
    return kExitPass;
  }
  std::string id = ctx.args.witness_id;
  WitnessOptions options;
  options.seed = ctx.args.seed;
  options.tolerance = ctx.args.tolerance;
  if (!ctx.config.is_null()) {
    if (id.empty() && ctx.config.contains("witness")) id = text(ctx.config, "witness", "config");
    if (!ctx.args.tolerance && ctx.config.contains("tolerance")) options.tolerance = number(ctx.config, "tolerance", "config");
    if (ctx.config.contains("seed")) options.seed = static_cast<std::uint64_t>(integer_or(ctx.config, "seed", 1, "config"));
    if (ctx.config.contains("grid")) options.grid = config_grid(ctx.config, {2, 2});
  }
  if (!ctx.args.grid.empty()) options.grid = parse_grid(ctx.args.grid);
  if (id.empty()) throw Error(ErrorCode::ConfigError, "witness needs an id (argument or config field 'witness')");
  ctx.log->info("running witness {}", id);
  const WitnessReport rep = run_witness(id, options);
  const std::string report = rep.text();
  ctx.out << report;
  if (!ctx.args.out_dir.empty()) write_atomic(ctx.out_dir() / ("witness-" + id + ".txt"), report);
  return rep.pass ? kExitPass : kExitFail;
}

int cmd_export(Context& ctx) {
  require_config(ctx);
  const BuiltSurface surface = build_surface(object(ctx.config, "surface", "config"), "surface");
  std::optional<TranslatorSpec> t;
  if (ctx.config.contains("translator")) t = build_translator(ctx.config.at("translator"));
  write_mesh(ctx, surface_mesh(surface.chart, ctx.grid({64, 48}), t), "surface");
  return kExitPass;
}

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_st>(err);
  auto log = std::make_shared<spdlog::logger>("kalpha", sink);
  log->set_pattern("[%l] %v");
  const char* env = std::getenv("KALPHA_LOG");
  const std::string level = env ? env : "info";
  if (level == "quiet") {
    log->set_level(spdlog::level::off);
  } else if (level == "debug") {
    log->set_level(spdlog::level::debug);
  } else {
    log->set_level(spdlog::level::info);
  }
  return log;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"K^alpha translators, canal and parallel surfaces, and the K^alpha flow", "kalpha"};
  app.require_subcommand(1);
  Args args;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "JSON config (schema kalpha/1)");
    sub->add_option("--out", args.out_dir, "output directory");
    sub->add_option("--tolerance", args.tolerance, "verification tolerance");
    sub->add_option("--grid", args.grid, "sampling grid NxM");
    sub->add_option("--seed", args.seed, "seed for randomized witnesses");
  };
  std::map<std::string, int (*)(Context&)> commands{
      {"curvature", cmd_curvature}, {"translator", cmd_translator}, {"solve", cmd_solve},
      {"flow", cmd_flow},           {"witness", cmd_witness},       {"export", cmd_export}};
  std::map<std::string, std::string> help{
      {"curvature", "tabulate K, H and principal curvatures on a grid"},
      {"translator", "check K^alpha = <U, w> on a surface"},
      {"solve", "tabulate a radius function and optionally mesh its revolution surface"},
      {"flow", "evolve a profile curve under the K^alpha flow"},
      {"witness", "run a named numerical witness"},
      {"export", "write a surface mesh with curvature scalars"}};
  for (const auto& [name, _] : commands) {
    CLI::App* sub = app.add_subcommand(name, help[name]);
    add_common(sub);
    if (name == "witness") {
      sub->add_option("id", args.witness_id, "witness id");
      sub->add_flag("--list", args.list, "list witness ids");
    }
  }

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitError;
  }

  auto log = make_logger(err);
  try {
    Context ctx{args, Json(), out, log};
    if (!args.config_path.empty()) ctx.config = parse_config(read_file(args.config_path));
    for (const auto& [name, fn] : commands) {
      if (app.got_subcommand(name)) return fn(ctx);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace kalpha::cli
