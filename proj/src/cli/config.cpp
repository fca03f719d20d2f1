#include "config.hpp"

#include <charconv>
#include <cmath>

#include "kalpha/error.hpp"
#include "kalpha/offset.hpp"
#include "kalpha/quadrature.hpp"
#include "kalpha/radius_ode.hpp"
#include "kalpha/shapes.hpp"
#include "kalpha/spine.hpp"

namespace kalpha::cli {

namespace {

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorCode::ConfigError, message); }

std::string path(const std::string& where, const std::string& key) { return where + "." + key; }

std::pair<double, double> range(const Json& spec, const std::string& key, const std::string& where) {
  if (!spec.contains(key)) fail("missing field '" + path(where, key) + "'");
  const Json& v = spec.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    fail("field '" + path(where, key) + "' must be [lo, hi]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

Vec3 vector3(const Json& spec, const std::string& key, const Vec3& fallback, const std::string& where) {
  if (!spec.contains(key)) return fallback;
  const Json& v = spec.at(key);
  if (!v.is_array() || v.size() != 3) fail("field '" + path(where, key) + "' must be [x, y, z]");
  Vec3 out;
  for (int k = 0; k < 3; ++k) {
    if (!v[k].is_number()) fail("field '" + path(where, key) + "' must be numeric");
    out[k] = v[k].get<double>();
  }
  return out;
}

RadiusProfile maybe_restricted(RadiusProfile profile, const Json& spec, const std::string& where) {
  if (!spec.contains("s_range")) return profile;
  const auto [a, b] = range(spec, "s_range", where);
  return profile.restricted(a, b);
}

}  // namespace

Json parse_config(const std::string& source) {
  Json config;
  try {
    config = Json::parse(source);
  } catch (const Json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  if (!config.is_object()) fail("config must be a JSON object");
  if (!config.contains("schema")) fail("missing field 'schema'");
  if (config.at("schema") != kSchema) fail(std::string("unsupported schema, expected ") + kSchema);
  return config;
}

double number(const Json& spec, const std::string& key, const std::string& where) {
  if (!spec.is_object() || !spec.contains(key)) fail("missing field '" + path(where, key) + "'");
  const Json& v = spec.at(key);
  if (!v.is_number()) fail("field '" + path(where, key) + "' must be a number");
  return v.get<double>();
}

double number_or(const Json& spec, const std::string& key, double fallback, const std::string& where) {
  return spec.contains(key) ? number(spec, key, where) : fallback;
}

int integer_or(const Json& spec, const std::string& key, int fallback, const std::string& where) {
  if (!spec.contains(key)) return fallback;
  const Json& v = spec.at(key);
  if (!v.is_number_integer()) fail("field '" + path(where, key) + "' must be an integer");
  return v.get<int>();
}

std::string text(const Json& spec, const std::string& key, const std::string& where) {
  if (!spec.is_object() || !spec.contains(key)) fail("missing field '" + path(where, key) + "'");
  const Json& v = spec.at(key);
  if (!v.is_string()) fail("field '" + path(where, key) + "' must be a string");
  return v.get<std::string>();
}

const Json& object(const Json& spec, const std::string& key, const std::string& where) {
  if (!spec.is_object() || !spec.contains(key)) fail("missing field '" + path(where, key) + "'");
  const Json& v = spec.at(key);
  if (!v.is_object()) fail("field '" + path(where, key) + "' must be an object");
  return v;
}

QuadratureParams build_quadrature_params(const Json& spec, const std::string& where) {
  QuadratureParams p;
  try {
    p.family = parse_family(text(spec, "family", where));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    fail(e.what());
  }
  if (p.family == QuadratureFamily::WeingartenWC1) {
    p.c = number(spec, "c", where);
  } else if (p.family == QuadratureFamily::WeingartenWC2) {
    p.a = number(spec, "a", where);
    p.b = number(spec, "b", where);
  }
  p.c1 = number(spec, "c1", where);
  p.branch = integer_or(spec, "branch", 1, where);
  if (p.branch != 1 && p.branch != -1) fail("field '" + path(where, "branch") + "' must be 1 or -1");
  std::tie(p.r_min, p.r_max) = range(spec, "r_range", where);
  if (spec.contains("c2")) p.c2 = number(spec, "c2", where);
  if (spec.contains("r_anchor")) p.r_anchor = number(spec, "r_anchor", where);
  p.table_size = integer_or(spec, "table_size", p.table_size, where);
  return p;
}

RadiusProfile build_radius(const Json& spec, const std::string& where) {
  if (!spec.is_object()) fail("field '" + where + "' must be an object");
  const std::string type = text(spec, "type", where);
  if (type == "constant") {
    const auto [a, b] = range(spec, "s_range", where);
    return RadiusProfile::constant(number(spec, "r", where), a, b);
  }
  if (type == "quadrature") {
    return maybe_restricted(quadrature_radius(build_quadrature_params(spec, where)).profile(), spec, where);
  }
  if (type == "radius2") {
    const auto [a, b] = range(spec, "s_range", where);
    return radius2_profile(number(spec, "s0", where), a, b);
  }
  if (type == "ode") {
    const auto [a, b] = range(spec, "s_range", where);
    const OdeSolution sol = solve_radius_ode(number(spec, "alpha", where), number(spec, "r0", where),
                                             number(spec, "dr0", where), a, b);
    return sol.profile;
  }
  fail("unknown radius type '" + type + "' at '" + where + "'");
}

SpineCurve build_spine(const Json& spec, const std::string& where) {
  if (!spec.is_object()) fail("field '" + where + "' must be an object");
  const std::string type = text(spec, "type", where);
  if (type == "line") {
    LineSpec line;
    line.length = number(spec, "length", where);
    line.origin = vector3(spec, "origin", line.origin, where);
    return make_spine(line);
  }
  if (type == "helix") {
    return make_spine(HelixSpec{number(spec, "a", where), number(spec, "b", where), number(spec, "length", where)});
  }
  if (type == "circle") {
    return make_spine(CircleSpec{number(spec, "radius", where), number(spec, "length", where)});
  }
  fail("unknown spine type '" + type + "' at '" + where + "'");
}

BuiltSurface build_surface(const Json& spec, const std::string& where) {
  if (!spec.is_object()) fail("field '" + where + "' must be an object");
  const std::string kind = text(spec, "kind", where);
  BuiltSurface out{shapes::plane(), std::nullopt, kind};
  if (kind == "sphere") {
    out.chart = shapes::sphere(number(spec, "radius", where));
  } else if (kind == "plane") {
    out.chart = shapes::plane();
  } else if (kind == "cylinder") {
    out.chart = shapes::cylinder(number(spec, "radius", where), number(spec, "length", where));
  } else if (kind == "quadric") {
    out.chart = shapes::quadric_graph(number(spec, "a", where), number(spec, "b", where), number(spec, "c", where));
  } else if (kind == "catenoid") {
    const auto [a, b] = spec.contains("s_range") ? range(spec, "s_range", where) : std::pair{-1.0, 1.0};
    out.chart = shapes::catenoid(a, b);
  } else if (kind == "revolution") {
    out.canal = surface_of_revolution(build_radius(object(spec, "radius", where), path(where, "radius")));
  } else if (kind == "canal") {
    out.canal = build_canal(build_spine(object(spec, "spine", where), path(where, "spine")),
                            build_radius(object(spec, "radius", where), path(where, "radius")));
  } else if (kind == "tube") {
    const SpineCurve spine = build_spine(object(spec, "spine", where), path(where, "spine"));
    out.canal = build_canal(spine, RadiusProfile::constant(number(spec, "r", where), 0.0, spine.length()));
  } else if (kind == "parallel") {
    const BuiltSurface base = build_surface(object(spec, "base", where), path(where, "base"));
    out.chart = build_parallel(base.chart, number(spec, "lambda", where)).chart;
  } else {
    fail("unknown surface kind '" + kind + "' at '" + where + "'");
  }
  if (out.canal) out.chart = out.canal->chart;

  if (spec.contains("derivatives")) {
    const std::string mode = text(spec, "derivatives", where);
    if (mode == "finite-difference") {
      out.chart = out.chart.finite_difference_view();
    } else if (mode != "analytic") {
      fail("field '" + path(where, "derivatives") + "' must be 'analytic' or 'finite-difference'");
    }
  }
  return out;
}

TranslatorSpec build_translator(const Json& spec, const std::string& where) {
  if (!spec.is_object()) fail("field '" + where + "' must be an object");
  TranslatorSpec t;
  t.alpha = number(spec, "alpha", where);
  t.w = vector3(spec, "w", t.w, where);
  if (t.alpha == 0) fail("field '" + path(where, "alpha") + "' must be nonzero");
  if (std::abs(t.w.norm() - 1) > 1e-9) fail("field '" + path(where, "w") + "' must be a unit vector");
  return t;
}

FlowConfig build_flow(const Json& spec, const std::string& where) {
  if (!spec.is_object()) fail("field '" + where + "' must be an object");
  FlowConfig f;
  FlowOptions& o = f.options;
  o.alpha = number_or(spec, "alpha", o.alpha, where);
  o.dt = number(spec, "dt", where);
  o.horizon = number(spec, "horizon", where);
  o.renode_every = integer_or(spec, "renode_every", o.renode_every, where);
  o.drift = number_or(spec, "drift", o.drift, where);
  o.interior_fraction = number_or(spec, "interior_fraction", o.interior_fraction, where);
  if (spec.contains("snapshots")) {
    const Json& s = spec.at("snapshots");
    if (!s.is_array()) fail("field '" + path(where, "snapshots") + "' must be an array");
    for (const Json& t : s) {
      if (!t.is_number()) fail("field '" + path(where, "snapshots") + "' must hold numbers");
      o.snapshot_times.push_back(t.get<double>());
    }
  }
  if (spec.contains("boundary")) {
    const std::string b = text(spec, "boundary", where);
    if (b == "translate") {
      o.boundary = BoundaryPolicy::Translate;
    } else if (b != "extrapolate") {
      fail("field '" + path(where, "boundary") + "' must be 'extrapolate' or 'translate'");
    }
  }
  if (spec.contains("max_deviation")) f.max_deviation = number(spec, "max_deviation", where);
  const int nodes = integer_or(spec, "nodes", 400, where);

  const std::string iw = path(where, "initial");
  const Json& init = object(spec, "initial", where);
  f.initial_kind = text(init, "type", iw);
  if (f.initial_kind == "translator") {
    // the alpha = 1 rotational translator with c1 = -2
    QuadratureParams p;
    p.family = QuadratureFamily::Alpha1;
    p.c1 = -2;
    p.r_min = 1.0;
    p.r_max = 1.35;
    p.c2 = radius1_s(1.0, 1.0);
    const auto [a, b] = init.contains("s_range") ? range(init, "s_range", iw) : std::pair{0.0, 0.72};
    f.initial = profile_from_radius(quadrature_radius(p).profile().restricted(a, b), nodes);
  } else if (f.initial_kind == "sphere") {
    f.initial = sphere_profile(number(init, "radius", iw), nodes, number_or(init, "margin", 0.3, iw));
  } else if (f.initial_kind == "ellipse") {
    f.initial = ellipse_profile(number(init, "a", iw), number(init, "b", iw), nodes,
                                number_or(init, "margin", 0.3, iw));
  } else if (f.initial_kind == "radius") {
    f.initial = profile_from_radius(build_radius(object(init, "radius", iw), path(iw, "radius")), nodes);
  } else {
    fail("unknown initial profile '" + f.initial_kind + "' at '" + iw + "'");
  }
  return f;
}

GridSpec parse_grid(const std::string& spec) {
  const auto x = spec.find('x');
  GridSpec g;
  auto parse = [&](std::string_view part, int& value) {
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    return ec == std::errc() && ptr == part.data() + part.size();
  };
  const std::string_view view(spec);
  if (x == std::string::npos || !parse(view.substr(0, x), g.n_s) || !parse(view.substr(x + 1), g.n_theta) ||
      g.n_s < 2 || g.n_theta < 2) {
    fail("grid must look like NxM with N, M >= 2, got '" + spec + "'");
  }
  return g;
}

GridSpec config_grid(const Json& config, GridSpec fallback) {
  if (!config.contains("grid")) return fallback;
  const Json& g = config.at("grid");
  if (!g.is_array() || g.size() != 2 || !g[0].is_number_integer() || !g[1].is_number_integer()) {
    fail("field 'grid' must be [n_s, n_theta]");
  }
  GridSpec out{g[0].get<int>(), g[1].get<int>()};
  if (out.n_s < 2 || out.n_theta < 2) fail("field 'grid' needs both counts >= 2");
  return out;
}

}  // namespace kalpha::cli
