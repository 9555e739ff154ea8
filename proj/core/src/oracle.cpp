#include "screenopt/oracle.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace screenopt {

OracleConfig OracleConfig::defaults_for(const ProblemInstance& instance) {
  OracleConfig config;
  const Box& box = instance.product_box();
  for (std::size_t d = 0; d < box.dim(); ++d)
    config.product_grid.push_back({box.lower[d], box.upper[d], box.upper[d] > box.lower[d] ? 9u : 1u});
  config.price_grid = {instance.prices().z_lower, instance.price_cap(), 21};
  config.max_menu_size = 2;
  return config;
}

std::size_t OracleConfig::item_count(const ProblemInstance& instance) const {
  std::size_t products = 1;
  for (const auto& a : product_grid) products *= a.count;
  std::size_t total = products * price_grid.count;
  // The grid may contain the outside option itself; it is not a separate item.
  const auto& outside = instance.outside();
  bool on_grid = product_grid.size() == outside.y_null.size();
  for (std::size_t d = 0; on_grid && d < product_grid.size(); ++d) {
    bool hit = false;
    for (std::size_t k = 0; k < product_grid[d].count && !hit; ++k)
      hit = std::abs(product_grid[d].at(k) - outside.y_null[d]) <= kProductEqualTol;
    on_grid = hit;
  }
  if (on_grid) {
    for (std::size_t k = 0; k < price_grid.count; ++k)
      if (std::abs(price_grid.at(k) - outside.z_null) <= kProductEqualTol) return total - 1;
  }
  return total;
}

double OracleConfig::menu_count(const ProblemInstance& instance) const {
  const double n = static_cast<double>(item_count(instance));
  double total = 0.0, binom = 1.0;
  for (std::size_t k = 0; k <= max_menu_size; ++k) {
    total += binom;
    binom = binom * (n - static_cast<double>(k)) / static_cast<double>(k + 1);
    if (binom < 0.0) binom = 0.0;
  }
  return total;
}

void OracleConfig::validate(const ProblemInstance& instance) const {
  const Box& box = instance.product_box();
  if (product_grid.size() != box.dim())
    throw InvalidInstance("oracle.product_grid needs one axis per product coordinate");
  for (std::size_t d = 0; d < box.dim(); ++d) {
    const auto& a = product_grid[d];
    if (a.count == 0) throw InvalidInstance("oracle product grid axis count must be positive");
    if (a.min > a.max || a.min < box.lower[d] - kDomainTol || a.max > box.upper[d] + kDomainTol)
      throw InvalidInstance("oracle product grid axis " + std::to_string(d) + " must lie inside product_box");
  }
  if (price_grid.count == 0) throw InvalidInstance("oracle price grid count must be positive");
  if (price_grid.min > price_grid.max || price_grid.min < instance.prices().z_lower - kDomainTol ||
      price_grid.max > instance.price_cap() + kDomainTol)
    throw InvalidInstance("oracle price grid must lie inside [z_lower, cap]");
  if (max_menu_size > 3) throw InvalidInstance("oracle.max_menu_size must be at most 3");
}

namespace {

struct ItemTable {
  std::vector<MenuItem> items;  // grid items, null excluded
  std::vector<Vec> utility;     // [item][agent]
  std::vector<Vec> profit;      // [item][agent]
  Vec null_utility;
  Vec null_profit;
};

ItemTable build_table(const ProblemInstance& instance, const OracleConfig& config, Executor& executor) {
  ItemTable table;
  const auto& outside = instance.outside();
  std::size_t products = 1;
  for (const auto& a : config.product_grid) products *= a.count;
  std::vector<std::size_t> idx(config.product_grid.size(), 0);
  for (std::size_t p = 0; p < products; ++p) {
    Vec y(idx.size());
    for (std::size_t d = 0; d < idx.size(); ++d) y[d] = config.product_grid[d].at(idx[d]);
    for (std::size_t q = 0; q < config.price_grid.count; ++q) {
      const double z = config.price_grid.at(q);
      if (same_product(y, outside.y_null) && std::abs(z - outside.z_null) <= kProductEqualTol) continue;
      table.items.push_back(MenuItem{y, z, false});
    }
    for (std::size_t d = idx.size(); d-- > 0;) {
      if (++idx[d] < config.product_grid[d].count) break;
      idx[d] = 0;
    }
  }

  const std::size_t n = instance.agent_count();
  const auto& g = instance.utility();
  table.utility.assign(table.items.size(), Vec(n));
  table.profit.assign(table.items.size(), Vec(n));
  executor.for_chunks(table.items.size(), 16, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        const ConstVec x = instance.agents().point(i);
        table.utility[j][i] = g.value(x, table.items[j].product, table.items[j].price);
        table.profit[j][i] = instance.profit()(x, table.items[j].product, table.items[j].price);
        if (!std::isfinite(table.utility[j][i])) throw NonFiniteResult("utility is not finite on the oracle grid");
        if (!std::isfinite(table.profit[j][i]))
          throw NonFiniteProfit("profit is not finite on the oracle grid", j + 1);
      }
  });
  table.null_utility = instance.reservation();
  table.null_profit.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    table.null_profit[i] = instance.profit()(instance.agents().point(i), outside.y_null, outside.z_null);
  return table;
}

/// Same selection rule as best_response with the null item at index 0.
double menu_profit(const ProblemInstance& instance, const ItemTable& t, const std::size_t* chosen, std::size_t k) {
  double total = 0.0;
  for (std::size_t i = 0; i < instance.agent_count(); ++i) {
    double best_u = t.null_utility[i];
    for (std::size_t a = 0; a < k; ++a) best_u = std::max(best_u, t.utility[chosen[a]][i]);
    double p = -std::numeric_limits<double>::infinity();
    bool have = false;
    if (t.null_utility[i] >= best_u - kTieTol) {
      p = t.null_profit[i];
      have = true;
    }
    for (std::size_t a = 0; a < k; ++a) {
      if (t.utility[chosen[a]][i] < best_u - kTieTol) continue;
      if (!have || t.profit[chosen[a]][i] > p) {
        p = t.profit[chosen[a]][i];
        have = true;
      }
    }
    total += instance.agents().weight(i) * p;
  }
  return total;
}

struct ChunkBest {
  double profit = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> items;
  std::vector<std::pair<double, double>> improvements;  // (local ordinal, profit)
};

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double b = 1.0;
  for (std::size_t i = 0; i < k; ++i) b = b * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return std::round(b);
}

/// All k-subsets of [0, n) whose first element is `first`, in lex order.
void scan_prefix(const ProblemInstance& instance, const ItemTable& t, std::size_t k, std::size_t first,
                 ChunkBest& out) {
  const std::size_t n = t.items.size();
  std::vector<std::size_t> combo(k);
  combo[0] = first;
  for (std::size_t a = 1; a < k; ++a) combo[a] = first + a;
  if (k > 0 && combo[k - 1] >= n) return;
  std::size_t ordinal = 0;
  for (;;) {
    const double p = menu_profit(instance, t, combo.data(), k);
    if (p > out.profit) {
      out.profit = p;
      out.items = combo;
      out.improvements.emplace_back(static_cast<double>(ordinal), p);
    }
    ++ordinal;
    // Advance positions 1..k-1 only; position 0 is fixed for this chunk.
    std::size_t a = k;
    while (a-- > 1)
      if (combo[a] < n - (k - a)) break;
    if (a == 0 || k <= 1) return;
    ++combo[a];
    for (std::size_t b = a + 1; b < k; ++b) combo[b] = combo[b - 1] + 1;
  }
}

}  // namespace

SolveReport solve_bruteforce(const ProblemInstance& instance, const OracleConfig& config, Executor& executor) {
  config.validate(instance);
  const double count = config.menu_count(instance);
  if (count > kOracleBudget) {
    std::ostringstream os;
    os << "oracle would enumerate " << count << " menus, above the budget of " << kOracleBudget;
    throw BudgetExceeded(os.str());
  }

  const ItemTable table = build_table(instance, config, executor);
  const std::size_t n_items = table.items.size();

  SolveReport report;
  report.termination = Termination::converged;
  double best_profit = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_items;
  double offset = 0.0;

  for (std::size_t k = 0; k <= config.max_menu_size && k <= n_items; ++k) {
    const std::size_t chunks = k == 0 ? 1 : n_items - k + 1;
    std::vector<ChunkBest> found(chunks);
    executor.for_each_index(chunks, [&](std::size_t c) {
      if (k == 0) {
        const double p = menu_profit(instance, table, nullptr, 0);
        found[c].profit = p;
        found[c].improvements.emplace_back(0.0, p);
      } else {
        scan_prefix(instance, table, k, c, found[c]);
      }
    });
    for (std::size_t c = 0; c < chunks; ++c) {
      for (const auto& [ordinal, p] : found[c].improvements)
        if (p > best_profit) {
          best_profit = p;
          best_items = found[c].items;
          report.profit_trace.push_back(
              {0, static_cast<std::size_t>(offset + ordinal), p, p});
        }
      offset += k == 0 ? 1.0 : binomial(n_items - c - 1, k - 1);
    }
  }

  std::vector<MenuItem> offers;
  for (std::size_t j : best_items) offers.push_back(table.items[j]);
  Menu menu = Menu::with_items(instance, std::move(offers));
  ProfitResult eval = aggregate_profit(instance, menu, executor);
  report.best_menu = std::move(menu);
  report.best_allocation = std::move(eval.allocation);
  report.best_profit = eval.profit;
  report.boundary_hits = find_boundary_hits(instance, report.best_menu);
  report.evaluations = static_cast<std::size_t>(count);
  return report;
}

}  // namespace screenopt
