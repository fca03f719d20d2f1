#pragma once

#include <json.hpp>

#include <optional>
#include <string>

#include "kalpha/canal.hpp"
#include "kalpha/curvature.hpp"
#include "kalpha/flow.hpp"
#include "kalpha/translator.hpp"

namespace kalpha::cli {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "kalpha/1";

/// Parses a config document and checks its schema tag. Throws ConfigError.
Json parse_config(const std::string& text);

/// A chart plus the canal data when the surface is one.
struct BuiltSurface {
  SurfaceChart chart;
  std::optional<CanalSurface> canal;
  std::string kind;
};

BuiltSurface build_surface(const Json& spec, const std::string& where = "surface");
RadiusProfile build_radius(const Json& spec, const std::string& where);
SpineCurve build_spine(const Json& spec, const std::string& where);
QuadratureParams build_quadrature_params(const Json& spec, const std::string& where);
TranslatorSpec build_translator(const Json& spec, const std::string& where = "translator");

struct FlowConfig {
  ProfileState initial;
  FlowOptions options;
  std::string initial_kind;
  std::optional<double> max_deviation;
};

FlowConfig build_flow(const Json& spec, const std::string& where = "flow");

/// "NxM" with both counts at least 2.
GridSpec parse_grid(const std::string& text);
GridSpec config_grid(const Json& config, GridSpec fallback);

/// Field accessors that name the missing or mistyped path.
double number(const Json& spec, const std::string& key, const std::string& where);
double number_or(const Json& spec, const std::string& key, double fallback, const std::string& where);
int integer_or(const Json& spec, const std::string& key, int fallback, const std::string& where);
std::string text(const Json& spec, const std::string& key, const std::string& where);
const Json& object(const Json& spec, const std::string& key, const std::string& where);

}  // namespace kalpha::cli
