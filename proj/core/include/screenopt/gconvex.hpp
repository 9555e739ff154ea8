#pragma once

// Discrete G-convex analysis on the agent grid: envelopes, G-subdifferentials,
// incentive compatibility, implementability and monotonicity checks.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "screenopt/executor.hpp"
#include "screenopt/menu.hpp"
#include "screenopt/model.hpp"

namespace screenopt {

/// Additive slack for every inequality checked in this module.
inline constexpr double kCheckTol = 1e-9;
/// Slack for the monotonicity comparison u(x) <= u(x').
inline constexpr double kMonotoneTol = 1e-12;

/// u_i = max over menu items of G(x_i, y_j, z_j).
UtilityProfile g_envelope(const ProblemInstance& instance, const Menu& menu,
                          Executor& executor = Executor::serial());

/// Candidates y whose supporting function at agent i,
/// x' -> G(x', y, H(x_i, y, u_i)), stays below u at every grid agent (up to
/// kCheckTol). Candidates whose H is unattainable are skipped.
std::vector<Vec> g_subdifferential(const ProblemInstance& instance, const UtilityProfile& u,
                                   std::size_t agent_index, const std::vector<Vec>& candidates);

struct GConvexityResult {
  bool convex = true;
  std::vector<std::size_t> empty_agents;  // agents with empty subdifferential
};

/// Discrete G-convexity: the subdifferential is nonempty at every agent.
GConvexityResult is_g_convex(const ProblemInstance& instance, const UtilityProfile& u,
                             const std::vector<Vec>& candidates, Executor& executor = Executor::serial());

struct IncentiveResult {
  bool compatible = true;
  /// Agent i who would rather take agent j's bundle, maximal violation,
  /// lowest (i, j) on ties.
  std::optional<std::pair<std::size_t, std::size_t>> violating_pair;
  double violation = 0.0;
};

/// G(x_i, y_i, z_i) >= G(x_i, y_j, z_j) - kCheckTol for every pair (i, j).
IncentiveResult is_incentive_compatible(const ProblemInstance& instance, const Allocation& allocation,
                                        Executor& executor = Executor::serial());

/// Taxation principle: one item per distinct assigned product priced at its
/// agents' common price, plus the null item at the end. Throws
/// InconsistentPrice when agents sharing a product (within 1e-12) were
/// charged prices more than 1e-8 apart.
Menu menu_from_assignment(const ProblemInstance& instance, const Allocation& allocation);

struct MonotoneResult {
  bool nondecreasing = true;
  /// (i, j) with x_i <= x_j coordinatewise but u_i > u_j; maximal violation,
  /// lowest pair on ties.
  std::optional<std::pair<std::size_t, std::size_t>> witness;
  double violation = 0.0;
};

/// Checks x <= x' (coordinatewise) => u(x) <= u(x') + 1e-12 over all
/// comparable grid pairs. Throws UnorderedGrid if no two distinct agents are
/// comparable.
MonotoneResult is_nondecreasing(const ProblemInstance& instance, const UtilityProfile& u);

/// max ||y||_2 over the subdifferentials at the given agents; 0 when all
/// are empty.
double subdifferential_radius(const ProblemInstance& instance, const UtilityProfile& u,
                              const std::vector<Vec>& candidates, const std::vector<std::size_t>& interior_agents);

/// Union of menu products and assigned products, first occurrence order,
/// duplicates (within 1e-12) removed.
std::vector<Vec> default_candidates(const Menu& menu, const Allocation& allocation);

/// Participation: u_i >= u_null(x_i) - kCheckTol. Returns violating agents.
std::vector<std::size_t> participation_violations(const ProblemInstance& instance, const UtilityProfile& u);

}  // namespace screenopt
