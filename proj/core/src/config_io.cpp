#include "screenopt/io/config_io.hpp"

#include <cmath>
#include <set>

#include <yaml-cpp/yaml.h>

#include "screenopt/io/csv_io.hpp"
#include "screenopt/io/instance_io.hpp"

namespace screenopt::io {
namespace {

void check_keys(const YAML::Node& map, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!map.IsMap()) throw SchemaError(where, "expected a mapping");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!ok.count(key)) throw SchemaError(where + "." + key, "unknown key");
  }
}

double real(const YAML::Node& n, const std::string& key) {
  try {
    const double v = n.as<double>();
    if (std::isfinite(v)) return v;
  } catch (const YAML::Exception&) {
  }
  throw SchemaError(key, "expected a finite number");
}

std::size_t count(const YAML::Node& n, const std::string& key) {
  const double v = real(n, key);
  if (v < 0 || v != std::floor(v)) throw SchemaError(key, "expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

bool flag(const YAML::Node& n, const std::string& key) {
  try {
    return n.as<bool>();
  } catch (const YAML::Exception&) {
    throw SchemaError(key, "expected true or false");
  }
}

AxisGrid axis(const YAML::Node& n, const std::string& key) {
  check_keys(n, key, {"min", "max", "count"});
  for (const char* k : {"min", "max", "count"})
    if (!n[k]) throw SchemaError(key + "." + k, "missing required key");
  AxisGrid a{real(n["min"], key + ".min"), real(n["max"], key + ".max"), count(n["count"], key + ".count")};
  if (a.count == 0) throw SchemaError(key + ".count", "must be positive");
  return a;
}

}  // namespace

OracleConfig RunConfig::oracle_for(const ProblemInstance& instance) const {
  OracleConfig c = OracleConfig::defaults_for(instance);
  if (oracle_product_grid) c.product_grid = *oracle_product_grid;
  if (oracle_price_grid) c.price_grid = *oracle_price_grid;
  if (oracle_max_menu_size) c.max_menu_size = *oracle_max_menu_size;
  return c;
}

RunConfig parse_run_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw SchemaError("<root>", std::string("not valid YAML: ") + e.what());
  }
  RunConfig rc;
  if (root.IsNull()) return rc;
  check_keys(root, "<root>", {"solve", "oracle", "validate"});

  if (const auto s = root["solve"]) {
    check_keys(s, "solve", {"seed", "max_iters", "restarts", "menu_size", "init_scheme", "tol_profit",
                            "stall_sweeps", "neighborhood", "anneal"});
    auto& c = rc.solve;
    if (s["seed"]) c.seed = static_cast<std::uint64_t>(count(s["seed"], "solve.seed"));
    if (s["max_iters"]) c.max_iters = count(s["max_iters"], "solve.max_iters");
    if (s["restarts"]) c.restarts = count(s["restarts"], "solve.restarts");
    if (s["menu_size"]) c.menu_size = count(s["menu_size"], "solve.menu_size");
    if (s["tol_profit"]) c.tol_profit = real(s["tol_profit"], "solve.tol_profit");
    if (s["stall_sweeps"]) c.stall_sweeps = count(s["stall_sweeps"], "solve.stall_sweeps");
    if (s["init_scheme"]) {
      const auto v = s["init_scheme"].as<std::string>();
      if (v == "random-in-box") c.init_scheme = InitScheme::random_in_box;
      else if (v == "grid-seeded") c.init_scheme = InitScheme::grid_seeded;
      else throw SchemaError("solve.init_scheme", "expected random-in-box or grid-seeded (use --warm-start for warm-start)");
    }
    if (const auto nb = s["neighborhood"]) {
      check_keys(nb, "solve.neighborhood", {"product_step", "price_step", "shrink_factor", "min_step"});
      auto& n = c.neighborhood;
      if (nb["product_step"]) n.product_step = real(nb["product_step"], "solve.neighborhood.product_step");
      if (nb["price_step"]) n.price_step = real(nb["price_step"], "solve.neighborhood.price_step");
      if (nb["shrink_factor"]) n.shrink_factor = real(nb["shrink_factor"], "solve.neighborhood.shrink_factor");
      if (nb["min_step"]) n.min_step = real(nb["min_step"], "solve.neighborhood.min_step");
    }
    if (const auto an = s["anneal"]) {
      check_keys(an, "solve.anneal", {"enabled", "temp0", "cooling"});
      if (an["enabled"]) c.anneal.enabled = flag(an["enabled"], "solve.anneal.enabled");
      if (an["temp0"]) c.anneal.temp0 = real(an["temp0"], "solve.anneal.temp0");
      if (an["cooling"]) c.anneal.cooling = real(an["cooling"], "solve.anneal.cooling");
    }
    try {
      c.validate();
    } catch (const InvalidInstance& e) {
      throw SchemaError("solve", e.what());
    }
  }

  if (const auto o = root["oracle"]) {
    check_keys(o, "oracle", {"product_grid", "price_grid", "max_menu_size"});
    if (const auto pg = o["product_grid"]) {
      if (!pg.IsSequence()) throw SchemaError("oracle.product_grid", "expected a list of axes");
      std::vector<AxisGrid> axes;
      for (std::size_t d = 0; d < pg.size(); ++d)
        axes.push_back(axis(pg[d], "oracle.product_grid[" + std::to_string(d) + "]"));
      rc.oracle_product_grid = std::move(axes);
    }
    if (o["price_grid"]) rc.oracle_price_grid = axis(o["price_grid"], "oracle.price_grid");
    if (o["max_menu_size"]) {
      rc.oracle_max_menu_size = count(o["max_menu_size"], "oracle.max_menu_size");
      if (*rc.oracle_max_menu_size > 3) throw SchemaError("oracle.max_menu_size", "must be at most 3");
    }
  }

  if (const auto v = root["validate"]) {
    check_keys(v, "validate", {"samples"});
    if (v["samples"]) rc.samples = count(v["samples"], "validate.samples");
  }
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) { return parse_run_config(read_text(path)); }

nlohmann::ordered_json to_json(const SolveConfig& c) {
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["max_iters"] = c.max_iters;
  j["restarts"] = c.restarts;
  j["menu_size"] = c.menu_size;
  j["init_scheme"] = to_string(c.init_scheme);
  j["tol_profit"] = c.tol_profit;
  j["stall_sweeps"] = c.stall_sweeps;
  const auto& n = c.neighborhood;
  j["neighborhood"] = {{"product_step", n.product_step}, {"price_step", n.price_step},
                       {"shrink_factor", n.shrink_factor}, {"min_step", n.min_step}};
  j["anneal"] = {{"enabled", c.anneal.enabled}, {"temp0", c.anneal.temp0}, {"cooling", c.anneal.cooling}};
  return j;
}

nlohmann::ordered_json to_json(const OracleConfig& c) {
  nlohmann::ordered_json j;
  auto axis_json = [](const AxisGrid& a) {
    return nlohmann::ordered_json{{"min", a.min}, {"max", a.max}, {"count", a.count}};
  };
  j["product_grid"] = nlohmann::ordered_json::array();
  for (const auto& a : c.product_grid) j["product_grid"].push_back(axis_json(a));
  j["price_grid"] = axis_json(c.price_grid);
  j["max_menu_size"] = c.max_menu_size;
  return j;
}

}  // namespace screenopt::io
