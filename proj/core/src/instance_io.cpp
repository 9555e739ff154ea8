#include "screenopt/io/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace screenopt::io {
namespace {

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

std::string index_key(const std::string& parent, std::size_t i) { return parent + "[" + std::to_string(i) + "]"; }

const YAML::Node require(const YAML::Node& map, const std::string& parent, const std::string& key) {
  const YAML::Node node = map[key];
  if (!node) throw SchemaError(join(parent, key), "missing required key");
  return node;
}

void check_keys(const YAML::Node& map, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!map.IsMap()) throw SchemaError(where.empty() ? "<root>" : where, "expected a mapping");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!ok.count(key)) throw SchemaError(join(where, key), "unknown key");
  }
}

double as_real(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) throw SchemaError(key, "expected a number");
  const auto text = node.Scalar();
  if (text == "inf" || text == ".inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw SchemaError(key, "expected a number, got '" + text + "'");
  }
}

double finite_real(const YAML::Node& node, const std::string& key) {
  const double v = as_real(node, key);
  if (!std::isfinite(v)) throw SchemaError(key, "expected a finite number");
  return v;
}

std::size_t as_count(const YAML::Node& node, const std::string& key) {
  const double v = finite_real(node, key);
  if (v < 1 || v != std::floor(v)) throw SchemaError(key, "expected a positive integer");
  return static_cast<std::size_t>(v);
}

Vec as_vec(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) throw SchemaError(key, "expected a list of numbers");
  Vec out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(finite_real(node[i], index_key(key, i)));
  return out;
}

std::vector<Vec> as_matrix(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence() || node.size() == 0) throw SchemaError(key, "expected a non-empty list of rows");
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < node.size(); ++i) rows.push_back(as_vec(node[i], index_key(key, i)));
  return rows;
}

std::string as_string(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) throw SchemaError(key, "expected a string");
  return node.Scalar();
}

AgentGrid parse_agents(const YAML::Node& node) {
  check_keys(node, "agents", {"grid", "points", "weights"});
  const bool has_grid = static_cast<bool>(node["grid"]);
  const bool has_points = static_cast<bool>(node["points"]);
  if (has_grid == has_points) throw SchemaError("agents", "exactly one of 'grid' or 'points' is required");

  std::vector<Vec> points;
  if (has_grid) {
    const auto grid = node["grid"];
    if (!grid.IsSequence() || grid.size() == 0) throw SchemaError("agents.grid", "expected a non-empty list of axes");
    std::vector<AxisGrid> axes;
    for (std::size_t d = 0; d < grid.size(); ++d) {
      const auto key = index_key("agents.grid", d);
      check_keys(grid[d], key, {"min", "max", "count"});
      AxisGrid a{finite_real(require(grid[d], key, "min"), join(key, "min")),
                 finite_real(require(grid[d], key, "max"), join(key, "max")),
                 as_count(require(grid[d], key, "count"), join(key, "count"))};
      if (a.max < a.min) throw SchemaError(join(key, "max"), "must not be below min");
      if (a.count > 1 && a.max == a.min) throw SchemaError(join(key, "count"), "must be 1 when min equals max");
      axes.push_back(a);
    }
    AgentGrid product = AgentGrid::product(axes);
    points = product.points();
  } else {
    points = as_matrix(node["points"], "agents.points");
  }

  Vec weights;
  const auto w = node["weights"];
  if (!w || (w.IsScalar() && w.Scalar() == "uniform")) {
    weights.assign(points.size(), 1.0 / static_cast<double>(points.size()));
  } else {
    weights = as_vec(w, "agents.weights");
    if (weights.size() != points.size())
      throw SchemaError("agents.weights", "expected " + std::to_string(points.size()) + " weights");
  }
  try {
    return AgentGrid(std::move(points), std::move(weights));
  } catch (const InvalidInstance& e) {
    throw SchemaError("agents", e.what());
  }
}

Bilinear parse_q(const YAML::Node& node, std::size_t m, std::size_t n) {
  if (!node) {
    if (m != n) throw SchemaError("utility.q", "required when agent and product dimensions differ");
    return Bilinear::identity(n);
  }
  const auto rows = as_matrix(node, "utility.q");
  if (rows.size() != m) throw SchemaError("utility.q", "expected " + std::to_string(m) + " rows");
  Bilinear q{m, n, {}};
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].size() != n)
      throw SchemaError(index_key("utility.q", i), "expected " + std::to_string(n) + " columns");
    q.coeffs.insert(q.coeffs.end(), rows[i].begin(), rows[i].end());
  }
  return q;
}

UtilitySpec parse_utility(const YAML::Node& node, std::size_t m, std::size_t n) {
  check_keys(node, "utility", {"family", "q", "f_coeffs", "expression", "kappa"});
  const auto family = as_string(require(node, "utility", "family"), "utility.family");
  if (family == "quasilinear") return UtilitySpec::quasilinear(parse_q(node["q"], m, n));
  if (family == "paper_coercive") {
    if (m != n) throw SchemaError("utility.family", "paper_coercive needs equal agent and product dimensions");
    return UtilitySpec::paper_coercive(n);
  }
  if (family == "separable_price") {
    const Vec c = as_vec(require(node, "utility", "f_coeffs"), "utility.f_coeffs");
    if (c.size() < 2) throw SchemaError("utility.f_coeffs", "needs at least a linear term");
    return UtilitySpec::separable_price(parse_q(node["q"], m, n), PricePolynomial{c});
  }
  if (family == "custom") {
    const auto expr = as_string(require(node, "utility", "expression"), "utility.expression");
    const double kappa = node["kappa"] ? finite_real(node["kappa"], "utility.kappa") : 0.0;
    if (m != n) throw SchemaError("utility.expression", "custom utilities need equal agent and product dimensions");
    try {
      return make_custom_utility(expr, kappa);
    } catch (const InvalidInstance& e) {
      throw SchemaError("utility.expression", e.what());
    }
  }
  throw SchemaError("utility.family", "unknown family '" + family + "'");
}

ProfitSpec parse_profit(const YAML::Node& node, std::size_t n) {
  check_keys(node, "profit", {"expression", "cost", "lower_bound", "c0"});
  const auto expr = as_string(require(node, "profit", "expression"), "profit.expression");
  const double lb = finite_real(require(node, "profit", "lower_bound"), "profit.lower_bound");
  const auto cost = require(node, "profit", "cost");
  auto spec = [&] {
    if (expr == "price_minus_quadratic_cost")
      return ProfitSpec::price_minus_quadratic_cost(finite_real(cost, "profit.cost"), lb);
    if (expr == "price_minus_linear_cost") {
      Vec c = as_vec(cost, "profit.cost");
      if (c.size() != n) throw SchemaError("profit.cost", "expected " + std::to_string(n) + " entries");
      return ProfitSpec::price_minus_linear_cost(std::move(c), lb);
    }
    throw SchemaError("profit.expression", "unknown expression '" + expr + "'");
  }();
  if (node["c0"]) spec.with_joint_bound(finite_real(node["c0"], "profit.c0"));
  return spec;
}

PriceInterval parse_prices(const YAML::Node& node) {
  check_keys(node, "prices", {"z_lower", "z_upper", "numeric_cap"});
  PriceInterval p;
  p.z_lower = finite_real(require(node, "prices", "z_lower"), "prices.z_lower");
  const double up = as_real(require(node, "prices", "z_upper"), "prices.z_upper");
  if (std::isnan(up) || up == -std::numeric_limits<double>::infinity())
    throw SchemaError("prices.z_upper", "expected a number or inf");
  if (std::isfinite(up)) p.z_upper = up;
  if (node["numeric_cap"]) {
    p.numeric_cap = finite_real(node["numeric_cap"], "prices.numeric_cap");
  } else if (!p.z_upper) {
    throw SchemaError("prices.numeric_cap", "required when z_upper is inf");
  }
  try {
    p.validate();
  } catch (const InvalidInstance& e) {
    throw SchemaError("prices", e.what());
  }
  return p;
}

Box parse_box(const YAML::Node& node) {
  if (!node.IsSequence() || node.size() == 0) throw SchemaError("product_box", "expected a non-empty list of axes");
  Box box;
  for (std::size_t d = 0; d < node.size(); ++d) {
    const auto key = index_key("product_box", d);
    check_keys(node[d], key, {"min", "max"});
    box.lower.push_back(finite_real(require(node[d], key, "min"), join(key, "min")));
    box.upper.push_back(finite_real(require(node[d], key, "max"), join(key, "max")));
    if (box.upper.back() < box.lower.back()) throw SchemaError(join(key, "max"), "must not be below min");
  }
  return box;
}

DeclaredConstants parse_assumptions(const YAML::Node& node) {
  DeclaredConstants out;
  if (!node) return out;
  check_keys(node, "assumptions", {"price_decay", "lipschitz_k", "gradient_growth"});
  if (const auto pd = node["price_decay"]) {
    check_keys(pd, "assumptions.price_decay", {"alpha", "a1", "a2", "b"});
    SuperlinearBound b;
    const std::string k = "assumptions.price_decay";
    if (pd["alpha"]) b.alpha = finite_real(pd["alpha"], join(k, "alpha"));
    b.a1 = finite_real(require(pd, k, "a1"), join(k, "a1"));
    b.a2 = finite_real(require(pd, k, "a2"), join(k, "a2"));
    b.b = finite_real(require(pd, k, "b"), join(k, "b"));
    if (b.alpha <= 1) throw SchemaError(join(k, "alpha"), "must exceed 1");
    out.price_decay = b;
  }
  if (node["lipschitz_k"]) out.lipschitz_k = finite_real(node["lipschitz_k"], "assumptions.lipschitz_k");
  if (const auto gg = node["gradient_growth"]) {
    const std::string k = "assumptions.gradient_growth";
    check_keys(gg, k, {"beta", "c", "d"});
    SublinearBound b;
    if (gg["beta"]) b.beta = finite_real(gg["beta"], join(k, "beta"));
    b.c = finite_real(require(gg, k, "c"), join(k, "c"));
    b.d = finite_real(require(gg, k, "d"), join(k, "d"));
    out.gradient_growth = b;
  }
  return out;
}

}  // namespace

ProblemInstance parse_instance(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw SchemaError("<root>", std::string("not valid YAML: ") + e.what());
  }
  check_keys(root, "", {"name", "agents", "utility", "profit", "prices", "outside", "product_box", "assumptions"});

  AgentGrid agents = parse_agents(require(root, "", "agents"));
  const Box box = parse_box(require(root, "", "product_box"));
  const std::size_t m = agents.dim();
  const std::size_t n = box.dim();
  UtilitySpec utility = parse_utility(require(root, "", "utility"), m, n);
  ProfitSpec profit = parse_profit(require(root, "", "profit"), n);
  const PriceInterval prices = parse_prices(require(root, "", "prices"));

  const auto out_node = require(root, "", "outside");
  check_keys(out_node, "outside", {"y_null", "z_null"});
  OutsideOption outside{as_vec(require(out_node, "outside", "y_null"), "outside.y_null"),
                        finite_real(require(out_node, "outside", "z_null"), "outside.z_null")};
  if (outside.y_null.size() != n)
    throw SchemaError("outside.y_null", "expected " + std::to_string(n) + " entries");

  DeclaredConstants declared = parse_assumptions(root["assumptions"]);
  try {
    return ProblemInstance(std::move(agents), std::move(utility), std::move(profit), prices, std::move(outside), box,
                           declared);
  } catch (const InvalidInstance& e) {
    throw SchemaError("<root>", e.what());
  }
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("<file>", "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

nlohmann::ordered_json instance_summary(const ProblemInstance& instance) {
  nlohmann::ordered_json j;
  const auto& g = instance.utility();
  j["utility"] = {{"family", to_string(g.family())}, {"name", g.name()}};
  for (const auto& [k, v] : g.params()) j["utility"]["params"][k] = v;
  j["profit"] = {{"name", instance.profit().name()}, {"lower_bound", instance.profit().lower_bound()}};
  for (const auto& [k, v] : instance.profit().params()) j["profit"]["params"][k] = v;
  if (instance.profit().joint_bound()) j["profit"]["c0"] = *instance.profit().joint_bound();
  j["agent_count"] = instance.agent_count();
  j["agent_dim"] = instance.agent_dim();
  j["product_dim"] = instance.product_dim();
  j["product_box"] = {{"lower", instance.product_box().lower}, {"upper", instance.product_box().upper}};
  const auto& p = instance.prices();
  j["prices"] = {{"z_lower", p.z_lower}, {"cap", p.cap()}, {"z_upper_finite", p.z_upper.has_value()}};
  j["outside"] = {{"y_null", instance.outside().y_null}, {"z_null", instance.outside().z_null}};
  return j;
}

}  // namespace screenopt::io
