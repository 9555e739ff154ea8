#pragma once

// Optional run configuration (--config): a YAML file with `solve:`,
// `oracle:` and `validate:` sections. Absent keys keep their defaults.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "screenopt/oracle.hpp"
#include "screenopt/solver.hpp"

namespace screenopt::io {

struct RunConfig {
  SolveConfig solve;
  std::optional<std::vector<AxisGrid>> oracle_product_grid;
  std::optional<AxisGrid> oracle_price_grid;
  std::optional<std::size_t> oracle_max_menu_size;
  std::size_t samples = 2000;  // validate sample count

  /// Oracle grids from the file, falling back to OracleConfig::defaults_for.
  OracleConfig oracle_for(const ProblemInstance& instance) const;
};

RunConfig parse_run_config(const std::string& yaml_text);
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const SolveConfig& config);
nlohmann::ordered_json to_json(const OracleConfig& config);

}  // namespace screenopt::io
