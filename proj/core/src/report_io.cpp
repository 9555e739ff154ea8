#include "screenopt/io/report_io.hpp"

#include <cmath>

#include "screenopt/io/csv_io.hpp"

namespace screenopt::io {
namespace {

using Json = nlohmann::ordered_json;

Json witness_json(const Witness& w) {
  Json j;
  if (!w.x.empty()) j["x"] = w.x;
  if (!w.x_alt.empty()) j["x_alt"] = w.x_alt;
  if (!w.y.empty()) j["y"] = w.y;
  if (w.z) j["z"] = *w.z;
  if (w.z_alt) j["z_alt"] = *w.z_alt;
  j["violation"] = w.violation;
  return j;
}

void dump_into(const Json& v, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        dump_into(it.value(), out, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Short numeric arrays stay on one line.
      bool flat = v.size() <= 8;
      for (const auto& e : v) flat = flat && e.is_primitive();
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out += ", ";
          dump_into(v[i], out, depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump_into(v[i], out, depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      out += std::isfinite(d) ? format_real(d) : "null";
      return;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

std::string dump(const Json& value) {
  std::string out;
  dump_into(value, out, 0);
  out += '\n';
  return out;
}

Json to_json(const Menu& menu) {
  Json items = Json::array();
  for (const auto& item : menu.items)
    items.push_back({{"product", item.product}, {"price", item.price}, {"is_null", item.is_null}});
  return items;
}

Json to_json(const SolveReport& report) {
  Json j;
  j["best_profit"] = report.best_profit;
  j["termination"] = to_string(report.termination);
  j["seed"] = report.seed;
  j["best_restart"] = report.best_restart;
  j["evaluations"] = report.evaluations;
  j["menu"] = to_json(report.best_menu);
  j["boundary_hits"] = report.boundary_hits;
  std::vector<std::size_t> takers(report.best_menu.size(), 0);
  for (const auto& c : report.best_allocation.choices)
    if (c.item < takers.size()) ++takers[c.item];
  j["agents_per_item"] = takers;
  j["trace_length"] = report.profit_trace.size();
  return j;
}

Json to_json(const AssumptionReport& report) {
  Json j;
  j["seed"] = report.seed;
  j["sample_count"] = report.sample_count;
  j["all_pass"] = report.all_pass();
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json e;
    e["id"] = "A" + std::to_string(c.id);
    e["status"] = to_string(c.status);
    e["detail"] = c.detail;
    if (c.witness) e["witness"] = witness_json(*c.witness);
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  const auto& pd = report.price_decay;
  j["price_decay"] = {{"alpha", pd.alpha}, {"a1", pd.a1}, {"a2", pd.a2}, {"b", pd.b},
                      {"declared", report.price_decay_declared}};
  j["lipschitz_k"] = report.lipschitz_k;
  const auto& gg = report.gradient_growth;
  j["gradient_growth"] = {{"beta", gg.beta}, {"c", gg.c}, {"d", gg.d}, {"declared", report.gradient_growth_declared}};
  j["joint_bound"] = {{"c0", report.joint_bound_c0}, {"declared", report.joint_bound_declared}};
  Json table = Json::array();
  for (const auto& e : report.coercivity) table.push_back({{"radius", e.radius}, {"min_gradient_l1", e.min_gradient_l1}});
  j["coercivity"] = std::move(table);
  return j;
}

}  // namespace screenopt::io
