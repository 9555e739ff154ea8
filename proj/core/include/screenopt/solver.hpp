#pragma once

// Menu optimization for the principal: best responses, aggregate profit and
// a seeded derivative-free local search over finite menus.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "screenopt/executor.hpp"
#include "screenopt/menu.hpp"
#include "screenopt/model.hpp"

namespace screenopt {

/// Items whose utilities lie within this distance of the best are tied.
inline constexpr double kTieTol = 1e-12;

struct BestResponse {
  std::size_t item = 0;
  double utility = 0.0;
};

/// Utility-maximizing item for agent type x. Ties (within 1e-12 of the
/// maximum) go to the item with the largest profit pi(x, y_j, z_j), then to
/// the lowest index.
BestResponse best_response(const ProblemInstance& instance, const Menu& menu, ConstVec x);

struct ProfitResult {
  double profit = 0.0;
  Allocation allocation;
};

/// Best response for every grid agent and sum_i mu_i pi(x_i, y_i, z_i).
/// Per-agent work may run on the executor; the sum is taken in agent order.
ProfitResult aggregate_profit(const ProblemInstance& instance, const Menu& menu,
                              Executor& executor = Executor::serial());

enum class InitScheme { random_in_box, grid_seeded, warm_start };
enum class Termination { converged, iter_cap, stalled };

const char* to_string(InitScheme scheme);
const char* to_string(Termination termination);

struct Neighborhood {
  double product_step = 0.25;
  double price_step = 0.25;
  double shrink_factor = 0.5;
  double min_step = 1e-7;
};

struct Annealing {
  bool enabled = false;
  double temp0 = 0.01;
  double cooling = 0.95;
};

struct SolveConfig {
  std::uint64_t seed = 0;
  std::size_t max_iters = 2000;  // poll sweeps per restart
  std::size_t restarts = 5;
  std::size_t menu_size = 3;     // items besides the null item
  InitScheme init_scheme = InitScheme::random_in_box;
  std::optional<Menu> warm_start;  // used by InitScheme::warm_start
  Neighborhood neighborhood;
  Annealing anneal;
  double tol_profit = 1e-12;
  /// Sweeps without incumbent improvement before a restart is declared
  /// stalled; only reachable while annealing keeps accepting moves.
  std::size_t stall_sweeps = 200;

  void validate() const;
};

struct TracePoint {
  std::size_t restart = 0;
  std::size_t iteration = 0;
  double profit = 0.0;     // profit of the current menu after this sweep
  double incumbent = 0.0;  // best profit seen so far across restarts
};

struct SolveReport {
  Menu best_menu;
  Allocation best_allocation;
  double best_profit = 0.0;
  std::vector<TracePoint> profit_trace;
  Termination termination = Termination::converged;
  /// Non-null items whose product touches a product_box wall or whose price
  /// sits at the cap.
  std::vector<std::size_t> boundary_hits;
  std::uint64_t seed = 0;
  std::size_t best_restart = 0;
  std::size_t evaluations = 0;
};

/// Maximizes aggregate profit over menus with config.menu_size items.
/// Refuses instances that fail the sampled price-monotonicity check
/// (AssumptionViolation). Deterministic in (instance, config); restarts run
/// on the executor and merge with the lowest restart winning ties.
SolveReport solve(const ProblemInstance& instance, const SolveConfig& config,
                  Executor& executor = Executor::serial());

/// Items of `menu` touching a product_box wall or the price cap.
std::vector<std::size_t> find_boundary_hits(const ProblemInstance& instance, const Menu& menu);

}  // namespace screenopt
