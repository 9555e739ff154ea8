#pragma once

// Sampled checks of the standing assumptions on G, H and pi. A pass means no
// violation larger than kAssumptionTol was found within the sample budget.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "screenopt/executor.hpp"
#include "screenopt/model.hpp"

namespace screenopt {

inline constexpr double kAssumptionTol = 1e-9;

enum class CheckStatus { pass, fail, not_checked };

const char* to_string(CheckStatus status);

/// Concrete point at which an inequality fails. Unused fields stay empty.
struct Witness {
  Vec x;
  Vec x_alt;
  Vec y;
  std::optional<double> z;
  std::optional<double> z_alt;
  double violation = 0.0;  // amount by which the inequality is broken
};

struct AssumptionCheck {
  int id = 0;  // 1..10
  CheckStatus status = CheckStatus::not_checked;
  std::string detail;
  std::optional<Witness> witness;
};

/// One probed radius of the coercivity table: the smallest observed
/// sum_i |D_{x_i} G| over products at distance `radius` from the origin.
struct CoercivityEntry {
  double radius = 0.0;
  double min_gradient_l1 = 0.0;
};

struct AssumptionReport {
  std::array<AssumptionCheck, 10> checks{};
  double lipschitz_k = 0.0;
  SuperlinearBound price_decay;      // fitted or declared (alpha, a1, a2, b)
  bool price_decay_declared = false;
  SublinearBound gradient_growth;    // fitted or declared (beta, c, d)
  bool gradient_growth_declared = false;
  std::vector<CoercivityEntry> coercivity;
  double joint_bound_c0 = 0.0;
  bool joint_bound_declared = false;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;

  const AssumptionCheck& check(int id) const { return checks.at(static_cast<std::size_t>(id - 1)); }
  /// True when no check failed.
  bool all_pass() const;
  /// Smallest probed radius r such that every table entry at radius >= r
  /// has min_gradient_l1 >= s; nullopt when the table never reaches s.
  std::optional<double> coercivity_radius(double s) const;
};

/// Runs every check. Deterministic in (instance, sample_count, seed); each
/// check draws from its own seed-derived stream so checks can run on
/// separate workers. Requires sample_count >= 100.
AssumptionReport validate_assumptions(const ProblemInstance& instance, std::size_t sample_count, std::uint64_t seed,
                                      Executor& executor = Executor::serial());

/// Only the strict price-monotonicity check (A2); used by the solver as a
/// precondition.
AssumptionCheck check_price_monotonicity(const ProblemInstance& instance, std::size_t sample_count,
                                         std::uint64_t seed);

/// Only the coordinate-monotonicity check in agent type (A3).
AssumptionCheck check_type_monotonicity(const ProblemInstance& instance, std::size_t sample_count,
                                        std::uint64_t seed);

}  // namespace screenopt
