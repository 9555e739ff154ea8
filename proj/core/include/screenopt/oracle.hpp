#pragma once

// Exhaustive search over small menus on fixed product and price grids.

#include <cstddef>
#include <vector>

#include "screenopt/executor.hpp"
#include "screenopt/model.hpp"
#include "screenopt/solver.hpp"

namespace screenopt {

/// Largest number of candidate menus the oracle will enumerate.
inline constexpr double kOracleBudget = 1e8;

struct OracleConfig {
  std::vector<AxisGrid> product_grid;  // one axis per product coordinate
  AxisGrid price_grid;
  std::size_t max_menu_size = 2;  // at most 3

  /// Product grid of 9 points per box axis, price grid of 21 points over
  /// [z_lower, cap], menus of up to 2 items.
  static OracleConfig defaults_for(const ProblemInstance& instance);

  void validate(const ProblemInstance& instance) const;
  /// Number of (product, price) items on the grids, excluding the null item.
  std::size_t item_count(const ProblemInstance& instance) const;
  /// Number of menus of size <= max_menu_size.
  double menu_count(const ProblemInstance& instance) const;
};

/// Exact maximizer over every menu of at most max_menu_size grid items
/// (plus the null item, always at index 0). Menus are visited by size, then
/// lexicographically by item index tuple; the first maximizer wins. Throws
/// BudgetExceeded before enumerating when the menu count exceeds 1e8.
SolveReport solve_bruteforce(const ProblemInstance& instance, const OracleConfig& config,
                             Executor& executor = Executor::serial());

}  // namespace screenopt
