#pragma once

#include <cstddef>
#include <vector>

#include "screenopt/model.hpp"

namespace screenopt {

/// Coordinatewise tolerance for treating two products as the same.
inline constexpr double kProductEqualTol = 1e-12;

struct MenuItem {
  Vec product;
  double price = 0.0;
  bool is_null = false;
};

/// Finite price menu. Products not listed are priced at the cap, which by
/// the price-cap bound makes them no better than the outside option.
struct Menu {
  std::vector<MenuItem> items;

  /// Menu holding only the outside option.
  static Menu null_only(const ProblemInstance& instance);
  /// Null item first, then the given (product, price) pairs.
  static Menu with_items(const ProblemInstance& instance, std::vector<MenuItem> offers);

  std::size_t size() const { return items.size(); }
  /// Index of the null item; the menu must be valid.
  std::size_t null_index() const;
};

bool same_product(ConstVec a, ConstVec b, double tol = kProductEqualTol);

/// Throws InvalidInstance unless: exactly one null item equal to
/// (y_null, z_null), every product inside product_box, every price in
/// [z_lower, cap], and no duplicate (product, price) pairs.
void validate_menu(const ProblemInstance& instance, const Menu& menu);

/// One agent's outcome: chosen item, utility u_i, price z_i, product y_i and
/// the principal's profit pi(x_i, y_i, z_i) (unweighted).
struct AgentChoice {
  std::size_t item = 0;
  double utility = 0.0;
  double price = 0.0;
  Vec product;
  double profit = 0.0;
};

struct Allocation {
  std::vector<AgentChoice> choices;

  std::size_t size() const { return choices.size(); }
  const AgentChoice& operator[](std::size_t i) const { return choices[i]; }
};

/// Finite utility values, one per grid agent.
using UtilityProfile = Vec;

}  // namespace screenopt
