#include "screenopt/gconvex.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace screenopt {

namespace {

double finite_or_throw(double v) {
  if (!std::isfinite(v)) throw NonFiniteResult("utility returned a non-finite value");
  return v;
}

bool weakly_below(ConstVec a, ConstVec b) {
  for (std::size_t d = 0; d < a.size(); ++d)
    if (a[d] > b[d]) return false;
  return true;
}

}  // namespace

UtilityProfile g_envelope(const ProblemInstance& instance, const Menu& menu, Executor& executor) {
  validate_menu(instance, menu);
  const auto& g = instance.utility();
  UtilityProfile u(instance.agent_count());
  executor.for_chunks(u.size(), 256, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const ConstVec x = instance.agents().point(i);
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& item : menu.items) best = std::max(best, finite_or_throw(g.value(x, item.product, item.price)));
      u[i] = best;
    }
  });
  return u;
}

std::vector<Vec> g_subdifferential(const ProblemInstance& instance, const UtilityProfile& u,
                                   std::size_t agent_index, const std::vector<Vec>& candidates) {
  if (u.size() != instance.agent_count()) throw InvalidInstance("utility profile length differs from agent count");
  if (agent_index >= u.size()) throw InvalidInstance("agent index out of range");
  const auto& g = instance.utility();
  const ConstVec x0 = instance.agents().point(agent_index);
  std::vector<Vec> members;
  for (const auto& y : candidates) {
    const auto z = try_invert_price_h(instance, x0, y, u[agent_index]);
    if (!z) continue;
    bool supported = true;
    for (std::size_t k = 0; k < u.size() && supported; ++k)
      supported = u[k] >= finite_or_throw(g.value(instance.agents().point(k), y, *z)) - kCheckTol;
    if (supported) members.push_back(y);
  }
  return members;
}

GConvexityResult is_g_convex(const ProblemInstance& instance, const UtilityProfile& u,
                             const std::vector<Vec>& candidates, Executor& executor) {
  std::vector<char> empty(u.size(), 0);
  executor.for_chunks(u.size(), 16, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) empty[i] = g_subdifferential(instance, u, i, candidates).empty();
  });
  GConvexityResult result;
  for (std::size_t i = 0; i < empty.size(); ++i)
    if (empty[i]) result.empty_agents.push_back(i);
  result.convex = result.empty_agents.empty();
  return result;
}

IncentiveResult is_incentive_compatible(const ProblemInstance& instance, const Allocation& allocation,
                                        Executor& executor) {
  const std::size_t n = allocation.size();
  if (n != instance.agent_count()) throw InvalidInstance("allocation length differs from agent count");
  for (const auto& c : allocation.choices)
    if (c.product.size() != instance.product_dim()) throw InvalidInstance("allocation product has wrong length");
  const auto& g = instance.utility();

  struct Worst {
    double violation = 0.0;
    std::size_t j = 0;
  };
  std::vector<Worst> per_agent(n);
  executor.for_chunks(n, 64, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const ConstVec x = instance.agents().point(i);
      const double own = finite_or_throw(g.value(x, allocation[i].product, allocation[i].price));
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double gain = finite_or_throw(g.value(x, allocation[j].product, allocation[j].price)) - own;
        if (gain > kCheckTol && gain > per_agent[i].violation) per_agent[i] = {gain, j};
      }
    }
  });

  IncentiveResult result;
  for (std::size_t i = 0; i < n; ++i)
    if (per_agent[i].violation > result.violation) {
      result.violation = per_agent[i].violation;
      result.violating_pair = std::make_pair(i, per_agent[i].j);
    }
  result.compatible = !result.violating_pair.has_value();
  return result;
}

Menu menu_from_assignment(const ProblemInstance& instance, const Allocation& allocation) {
  constexpr double kPriceAgreement = 1e-8;
  const auto& outside = instance.outside();
  std::vector<MenuItem> items;
  std::vector<std::size_t> first_agent;
  for (std::size_t i = 0; i < allocation.size(); ++i) {
    const auto& c = allocation[i];
    bool merged = false;
    for (std::size_t k = 0; k < items.size(); ++k) {
      if (!same_product(items[k].product, c.product)) continue;
      if (std::abs(items[k].price - c.price) > kPriceAgreement) {
        std::ostringstream os;
        os.precision(17);
        os << "agents " << first_agent[k] << " and " << i << " share a product but pay " << items[k].price << " and "
           << c.price;
        throw InconsistentPrice(os.str());
      }
      merged = true;
      break;
    }
    if (!merged) {
      items.push_back(MenuItem{c.product, c.price, false});
      first_agent.push_back(i);
    }
  }
  Menu menu;
  for (auto& item : items) {
    const bool is_outside =
        same_product(item.product, outside.y_null) && std::abs(item.price - outside.z_null) <= kProductEqualTol;
    if (!is_outside) menu.items.push_back(std::move(item));
  }
  menu.items.push_back(MenuItem{outside.y_null, outside.z_null, true});
  validate_menu(instance, menu);
  return menu;
}

MonotoneResult is_nondecreasing(const ProblemInstance& instance, const UtilityProfile& u) {
  const std::size_t n = instance.agent_count();
  if (u.size() != n) throw InvalidInstance("utility profile length differs from agent count");
  MonotoneResult result;
  bool comparable = false;
  for (std::size_t i = 0; i < n; ++i) {
    const ConstVec xi = instance.agents().point(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !weakly_below(xi, instance.agents().point(j))) continue;
      comparable = true;
      const double drop = u[i] - u[j];
      if (drop > kMonotoneTol && drop > result.violation) {
        result.violation = drop;
        result.witness = std::make_pair(i, j);
      }
    }
  }
  if (n > 1 && !comparable) throw UnorderedGrid("no two agents are comparable coordinatewise");
  result.nondecreasing = !result.witness.has_value();
  return result;
}

double subdifferential_radius(const ProblemInstance& instance, const UtilityProfile& u,
                              const std::vector<Vec>& candidates, const std::vector<std::size_t>& interior_agents) {
  double radius = 0.0;
  for (std::size_t i : interior_agents)
    for (const auto& y : g_subdifferential(instance, u, i, candidates)) {
      double s = 0.0;
      for (double a : y) s += a * a;
      radius = std::max(radius, std::sqrt(s));
    }
  return radius;
}

std::vector<Vec> default_candidates(const Menu& menu, const Allocation& allocation) {
  std::vector<Vec> out;
  auto add = [&](const Vec& y) {
    for (const auto& seen : out)
      if (same_product(seen, y)) return;
    out.push_back(y);
  };
  for (const auto& item : menu.items) add(item.product);
  for (const auto& c : allocation.choices) add(c.product);
  return out;
}

std::vector<std::size_t> participation_violations(const ProblemInstance& instance, const UtilityProfile& u) {
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] < instance.reservation()[i] - kCheckTol) bad.push_back(i);
  return bad;
}

}  // namespace screenopt
