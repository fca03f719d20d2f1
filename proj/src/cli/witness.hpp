#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kalpha/curvature.hpp"

namespace kalpha::cli {

struct WitnessOptions {
  std::uint64_t seed = 1;
  std::optional<double> tolerance;
  std::optional<GridSpec> grid;
};

struct WitnessReport {
  std::string id;
  std::vector<std::pair<std::string, std::string>> lines;
  bool pass = false;

  void add(const std::string& key, double value);
  void add(const std::string& key, const std::string& value);
  [[nodiscard]] std::string text() const;
};

const std::vector<std::string>& witness_ids();

/// Throws UnknownWitness for ids not in witness_ids().
WitnessReport run_witness(const std::string& id, const WitnessOptions& options);

}  // namespace kalpha::cli
