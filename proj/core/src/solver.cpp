#include "screenopt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "screenopt/assumptions.hpp"
#include "screenopt/rng.hpp"

namespace screenopt {

const char* to_string(InitScheme scheme) {
  switch (scheme) {
    case InitScheme::random_in_box: return "random-in-box";
    case InitScheme::grid_seeded: return "grid-seeded";
    case InitScheme::warm_start: return "warm-start";
  }
  return "unknown";
}

const char* to_string(Termination termination) {
  switch (termination) {
    case Termination::converged: return "converged";
    case Termination::iter_cap: return "iter-cap";
    case Termination::stalled: return "stalled";
  }
  return "unknown";
}

void SolveConfig::validate() const {
  if (max_iters < 1) throw InvalidInstance("solve.max_iters must be at least 1");
  if (restarts < 1) throw InvalidInstance("solve.restarts must be at least 1");
  if (!(neighborhood.product_step > 0.0) || !(neighborhood.price_step > 0.0))
    throw InvalidInstance("solve neighborhood steps must be positive");
  if (!(neighborhood.min_step > 0.0)) throw InvalidInstance("solve.neighborhood.min_step must be positive");
  if (!(neighborhood.shrink_factor > 0.0 && neighborhood.shrink_factor < 1.0))
    throw InvalidInstance("solve.neighborhood.shrink_factor must lie in (0, 1)");
  if (!(anneal.cooling > 0.0 && anneal.cooling < 1.0))
    throw InvalidInstance("solve.anneal.cooling must lie in (0, 1)");
  if (anneal.enabled && !(anneal.temp0 > 0.0)) throw InvalidInstance("solve.anneal.temp0 must be positive");
  if (!(tol_profit >= 0.0)) throw InvalidInstance("solve.tol_profit must be nonnegative");
  if (init_scheme == InitScheme::warm_start && !warm_start)
    throw InvalidInstance("warm-start initialization needs a menu");
}

namespace {

/// Unchecked best response; the menu must already be valid.
BestResponse respond(const ProblemInstance& instance, const Menu& menu, ConstVec x) {
  const auto& g = instance.utility();
  const std::size_t k = menu.size();
  double best_u = -std::numeric_limits<double>::infinity();
  // Small menus: keep utilities on the stack.
  double stack_u[16] = {};
  std::vector<double> heap_u;
  double* u = stack_u;
  if (k > 16) {
    heap_u.resize(k);
    u = heap_u.data();
  }
  for (std::size_t j = 0; j < k; ++j) {
    const auto& item = menu.items[j];
    u[j] = g.value(x, item.product, item.price);
    if (!std::isfinite(u[j]))
      throw NonFiniteResult("utility is not finite for menu item " + std::to_string(j));
    best_u = std::max(best_u, u[j]);
  }
  std::size_t chosen = k;
  double chosen_profit = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < k; ++j) {
    if (u[j] < best_u - kTieTol) continue;
    const auto& item = menu.items[j];
    const double p = instance.profit()(x, item.product, item.price);
    if (!std::isfinite(p)) throw NonFiniteProfit("profit is not finite for menu item " + std::to_string(j), j);
    if (chosen == k || p > chosen_profit) {
      chosen = j;
      chosen_profit = p;
    }
  }
  return {chosen, u[chosen]};
}

ProfitResult evaluate(const ProblemInstance& instance, const Menu& menu, Executor& executor) {
  const std::size_t n = instance.agent_count();
  ProfitResult result;
  result.allocation.choices.resize(n);
  executor.for_chunks(n, 512, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const ConstVec x = instance.agents().point(i);
      const auto br = respond(instance, menu, x);
      const auto& item = menu.items[br.item];
      auto& c = result.allocation.choices[i];
      c.item = br.item;
      c.utility = br.utility;
      c.price = item.price;
      c.product = item.product;
      c.profit = instance.profit()(x, item.product, item.price);
    }
  });
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += instance.agents().weight(i) * result.allocation.choices[i].profit;
  result.profit = total;
  return result;
}

bool duplicates_other(const Menu& menu, std::size_t j) {
  for (std::size_t k = 0; k < menu.size(); ++k)
    if (k != j && same_product(menu.items[k].product, menu.items[j].product) &&
        std::abs(menu.items[k].price - menu.items[j].price) <= kProductEqualTol)
      return true;
  return false;
}

/// Agent whose utility a product move on item j should hold fixed: among
/// buyers of j, the one closest to switching away; with no buyers, the agent
/// closest to buying j. Returns (agent, utility to preserve).
std::optional<std::pair<std::size_t, double>> reference_agent(const ProblemInstance& instance, const Menu& menu,
                                                               const Allocation& allocation, std::size_t j) {
  const auto& g = instance.utility();
  std::optional<std::pair<std::size_t, double>> ref;
  double best_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < allocation.size(); ++i) {
    if (allocation[i].item != j) continue;
    const ConstVec x = instance.agents().point(i);
    double alternative = -std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < menu.size(); ++l)
      if (l != j) alternative = std::max(alternative, g.value(x, menu.items[l].product, menu.items[l].price));
    const double slack = allocation[i].utility - alternative;
    if (slack < best_slack) {
      best_slack = slack;
      ref = std::make_pair(i, allocation[i].utility);
    }
  }
  if (ref) return ref;
  double best_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < allocation.size(); ++i) {
    const double gap = g.value(instance.agents().point(i), menu.items[j].product, menu.items[j].price) -
                       allocation[i].utility;
    if (gap > best_gap) {
      best_gap = gap;
      ref = std::make_pair(i, allocation[i].utility);
    }
  }
  return ref;
}

double initial_price(const ProblemInstance& instance, ConstVec y, std::size_t agent, Rng& rng) {
  const double lo = instance.prices().z_lower;
  const double hi = instance.price_cap();
  const auto z = try_invert_price_h(instance, instance.agents().point(agent), y, instance.reservation()[agent]);
  return z ? std::clamp(*z, lo, hi) : rng.uniform(lo, hi);
}

Menu initial_menu(const ProblemInstance& instance, const SolveConfig& config, std::size_t restart, Rng& rng) {
  if (restart == 0 && config.init_scheme == InitScheme::warm_start) {
    Menu warm = *config.warm_start;
    validate_menu(instance, warm);
    std::stable_partition(warm.items.begin(), warm.items.end(), [](const MenuItem& it) { return it.is_null; });
    return warm;
  }
  const Box& box = instance.product_box();
  const std::size_t n = instance.agent_count();
  const std::size_t m = config.menu_size;
  Menu menu = Menu::null_only(instance);
  for (std::size_t j = 0; j < m; ++j) {
    MenuItem item;
    item.product.resize(box.dim());
    std::size_t agent = 0;
    if (restart == 0 && config.init_scheme == InitScheme::grid_seeded) {
      const double t = static_cast<double>(j + 1) / static_cast<double>(m + 1);
      for (std::size_t d = 0; d < box.dim(); ++d) item.product[d] = box.lower[d] + t * (box.upper[d] - box.lower[d]);
      agent = std::min(n - 1, static_cast<std::size_t>(t * static_cast<double>(n)));
    } else {
      for (std::size_t d = 0; d < box.dim(); ++d) item.product[d] = rng.uniform(box.lower[d], box.upper[d]);
      agent = rng.index(n);
    }
    item.price = initial_price(instance, item.product, agent, rng);
    menu.items.push_back(std::move(item));
    while (duplicates_other(menu, menu.size() - 1)) menu.items.back().price = rng.uniform(instance.prices().z_lower, instance.price_cap());
  }
  return menu;
}

struct RestartResult {
  Menu menu;
  double profit = -std::numeric_limits<double>::infinity();
  Termination termination = Termination::converged;
  std::vector<TracePoint> trace;  // incumbent column local to the restart
  std::size_t evaluations = 0;
};

RestartResult run_restart(const ProblemInstance& instance, const SolveConfig& config, std::size_t restart,
                          Executor& executor) {
  Rng rng(Rng::derive(config.seed, 1000 + restart));
  RestartResult out;
  const Box& box = instance.product_box();
  const double z_lo = instance.prices().z_lower;
  const double z_hi = instance.price_cap();

  Menu current = initial_menu(instance, config, restart, rng);
  ProfitResult current_eval = evaluate(instance, current, executor);
  ++out.evaluations;
  out.menu = current;
  out.profit = current_eval.profit;
  out.trace.push_back({restart, 0, current_eval.profit, out.profit});

  double product_step = config.neighborhood.product_step;
  double price_step = config.neighborhood.price_step;
  std::size_t last_improvement = 0;
  out.termination = Termination::iter_cap;

  for (std::size_t iter = 1; iter <= config.max_iters; ++iter) {
    bool accepted_any = false;
    const double temperature = config.anneal.enabled
                                   ? config.anneal.temp0 * std::pow(config.anneal.cooling, static_cast<double>(iter))
                                   : 0.0;

    auto consider = [&](Menu&& trial, std::size_t j) {
      if (duplicates_other(trial, j)) return;
      ProfitResult eval = evaluate(instance, trial, executor);
      ++out.evaluations;
      const double delta = eval.profit - current_eval.profit;
      bool accept = delta > config.tol_profit;
      if (!accept && config.anneal.enabled && temperature > 0.0) accept = rng.uniform() < std::exp(delta / temperature);
      if (!accept) return;
      current = std::move(trial);
      current_eval = std::move(eval);
      accepted_any = true;
      if (current_eval.profit > out.profit + config.tol_profit) {
        out.profit = current_eval.profit;
        out.menu = current;
        last_improvement = iter;
      }
    };

    for (std::size_t j = 0; j < current.size(); ++j) {
      if (current.items[j].is_null) continue;
      for (std::size_t d = 0; d < box.dim(); ++d) {
        for (const double sign : {1.0, -1.0}) {
          const double old = current.items[j].product[d];
          const double moved = std::clamp(old + sign * product_step, box.lower[d], box.upper[d]);
          if (moved == old) continue;
          {
            Menu trial = current;
            trial.items[j].product[d] = moved;
            consider(std::move(trial), j);
          }
          // Same product move with the price re-derived so the reference
          // agent keeps its utility.
          if (const auto ref = reference_agent(instance, current, current_eval.allocation, j)) {
            const double base = current.items[j].product[d];
            const double coupled = std::clamp(base + sign * product_step, box.lower[d], box.upper[d]);
            if (coupled == base) continue;
            Menu trial = current;
            trial.items[j].product[d] = coupled;
            const auto z =
                try_invert_price_h(instance, instance.agents().point(ref->first), trial.items[j].product, ref->second);
            if (!z) continue;
            trial.items[j].price = *z;
            consider(std::move(trial), j);
          }
        }
      }
      for (const double sign : {1.0, -1.0}) {
        const double old = current.items[j].price;
        const double moved = std::clamp(old + sign * price_step, z_lo, z_hi);
        if (moved == old) continue;
        Menu trial = current;
        trial.items[j].price = moved;
        consider(std::move(trial), j);
      }
    }

    out.trace.push_back({restart, iter, current_eval.profit, out.profit});

    if (!accepted_any) {
      product_step *= config.neighborhood.shrink_factor;
      price_step *= config.neighborhood.shrink_factor;
      if (std::max(product_step, price_step) < config.neighborhood.min_step) {
        out.termination = Termination::converged;
        break;
      }
    }
    if (config.anneal.enabled && iter - last_improvement >= config.stall_sweeps) {
      out.termination = Termination::stalled;
      break;
    }
  }
  return out;
}

}  // namespace

BestResponse best_response(const ProblemInstance& instance, const Menu& menu, ConstVec x) {
  validate_menu(instance, menu);
  if (!instance.agents().bounds().contains(x, kDomainTol)) throw DomainError("agent type lies outside the agent grid bounds");
  return respond(instance, menu, x);
}

ProfitResult aggregate_profit(const ProblemInstance& instance, const Menu& menu, Executor& executor) {
  validate_menu(instance, menu);
  return evaluate(instance, menu, executor);
}

std::vector<std::size_t> find_boundary_hits(const ProblemInstance& instance, const Menu& menu) {
  std::vector<std::size_t> hits;
  const Box& box = instance.product_box();
  for (std::size_t j = 0; j < menu.size(); ++j) {
    const auto& item = menu.items[j];
    if (item.is_null) continue;
    bool wall = item.price >= instance.price_cap() - kDomainTol;
    for (std::size_t d = 0; d < box.dim() && !wall; ++d)
      wall = item.product[d] <= box.lower[d] + kDomainTol || item.product[d] >= box.upper[d] - kDomainTol;
    if (wall) hits.push_back(j);
  }
  return hits;
}

SolveReport solve(const ProblemInstance& instance, const SolveConfig& config, Executor& executor) {
  config.validate();
  const auto monotone = check_price_monotonicity(instance, 256, config.seed);
  if (monotone.status == CheckStatus::fail) {
    std::ostringstream os;
    os.precision(17);
    os << "instance fails the price-monotonicity check (A2): " << monotone.detail;
    if (monotone.witness && monotone.witness->z && monotone.witness->z_alt)
      os << " at z=" << *monotone.witness->z << ", z'=" << *monotone.witness->z_alt;
    throw AssumptionViolation(os.str());
  }

  std::vector<RestartResult> results(config.restarts);
  if (config.restarts == 1) {
    results[0] = run_restart(instance, config, 0, executor);
  } else {
    executor.for_each_index(config.restarts, [&](std::size_t r) {
      results[r] = run_restart(instance, config, r, Executor::serial());
    });
  }

  SolveReport report;
  report.seed = config.seed;
  std::size_t best = 0;
  double running = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < results.size(); ++r) {
    for (const auto& tp : results[r].trace)
      report.profit_trace.push_back({tp.restart, tp.iteration, tp.profit, std::max(running, tp.incumbent)});
    running = std::max(running, results[r].profit);
    if (results[r].profit > results[best].profit) best = r;
    report.evaluations += results[r].evaluations;
  }
  report.best_restart = best;
  report.termination = results[best].termination;

  Menu chosen = std::move(results[best].menu);
  const ProfitResult null_eval = evaluate(instance, Menu::null_only(instance), executor);
  ProfitResult final_eval = evaluate(instance, chosen, executor);
  if (null_eval.profit > final_eval.profit) {
    chosen = Menu::null_only(instance);
    final_eval = null_eval;
    // Recorded as an extra stage after the last restart so the incumbent
    // column still ends at best_profit.
    report.profit_trace.push_back({results.size(), 0, null_eval.profit, std::max(running, null_eval.profit)});
  }
  report.best_menu = std::move(chosen);
  report.best_allocation = std::move(final_eval.allocation);
  report.best_profit = final_eval.profit;
  report.boundary_hits = find_boundary_hits(instance, report.best_menu);
  return report;
}

}  // namespace screenopt
