#pragma once

// Instance builders shared by the unit, property and acceptance tests.

#include <cmath>
#include <string>
#include <vector>

#include "screenopt/menu.hpp"
#include "screenopt/model.hpp"
#include "screenopt/rng.hpp"

namespace screenopt::testing {

inline AgentGrid points(std::vector<Vec> pts) {
  const std::size_t n = pts.size();
  return AgentGrid(std::move(pts), Vec(n, 1.0 / static_cast<double>(n)));
}

inline AgentGrid square_grid(double lo, double hi, std::size_t count) {
  return AgentGrid::product({{lo, hi, count}, {lo, hi, count}});
}

inline Box cube(std::size_t dim, double lo, double hi) { return Box{Vec(dim, lo), Vec(dim, hi)}; }

inline PriceInterval prices(double lo, double hi) { return PriceInterval{lo, hi, hi}; }

/// G = x y - z in one dimension, pi = z - cost y^2.
inline ProblemInstance linear_1d(AgentGrid agents, double cost = 0.5, double box_hi = 2.0, double cap = 10.0,
                                 double z_lower = 0.0) {
  return ProblemInstance(std::move(agents), UtilitySpec::quasilinear(Bilinear::identity(1)),
                         ProfitSpec::price_minus_quadratic_cost(cost, z_lower - cost * box_hi * box_hi),
                         prices(z_lower, cap), OutsideOption{{0.0}, 0.0}, cube(1, 0.0, box_hi));
}

inline ProblemInstance single_agent() { return linear_1d(AgentGrid({{1.0}}, {1.0})); }

inline ProblemInstance two_type() { return linear_1d(AgentGrid({{0.3}, {0.9}}, {0.5, 0.5})); }

/// The four two-dimensional families used by the suites, on a 5 x 5 grid
/// over [0.1, 0.9]^2.
enum class Family { quasilinear, paper_coercive, separable_price, wealth_scaled };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::quasilinear: return "quasilinear";
    case Family::paper_coercive: return "paper_coercive";
    case Family::separable_price: return "separable_price";
    case Family::wealth_scaled: return "wealth_scaled";
  }
  return "?";
}

inline std::vector<Family> all_families() {
  return {Family::quasilinear, Family::paper_coercive, Family::separable_price, Family::wealth_scaled};
}

inline ProblemInstance family_instance(Family f, std::size_t count = 5) {
  AgentGrid agents = square_grid(0.1, 0.9, count);
  const OutsideOption outside{{0.0, 0.0}, 0.0};
  switch (f) {
    case Family::quasilinear:
      return ProblemInstance(std::move(agents), UtilitySpec::quasilinear(Bilinear::identity(2)),
                             ProfitSpec::price_minus_quadratic_cost(0.5, -4.0), prices(0.0, 10.0), outside,
                             cube(2, 0.0, 2.0));
    case Family::paper_coercive:
      return ProblemInstance(std::move(agents), UtilitySpec::paper_coercive(2),
                             ProfitSpec::price_minus_quadratic_cost(0.5, -37.0), PriceInterval{-1.0, {}, 100.0},
                             outside, cube(2, 0.0, 6.0));
    case Family::separable_price:
      return ProblemInstance(std::move(agents),
                             UtilitySpec::separable_price(Bilinear::identity(2), PricePolynomial{{0.0, 1.0, 0.0, 0.5}}),
                             ProfitSpec::price_minus_linear_cost({0.2, 0.2}, -0.8), prices(0.0, 5.0), outside,
                             cube(2, 0.0, 2.0));
    case Family::wealth_scaled:
      return ProblemInstance(std::move(agents), make_custom_utility("wealth_scaled_price", 0.5),
                             ProfitSpec::price_minus_quadratic_cost(0.5, -4.0), prices(0.0, 5.0), outside,
                             cube(2, 0.0, 2.0));
  }
  throw std::logic_error("unknown family");
}

/// Random menu with `k` items in the product box and prices in [z_lower, cap].
inline Menu random_menu(const ProblemInstance& inst, Rng& rng, std::size_t k) {
  std::vector<MenuItem> offers;
  const Box& box = inst.product_box();
  while (offers.size() < k) {
    MenuItem item;
    for (std::size_t d = 0; d < box.dim(); ++d) item.product.push_back(rng.uniform(box.lower[d], box.upper[d]));
    // Bias prices toward the part of the range agents can afford.
    const double hi = std::min(inst.price_cap(), inst.prices().z_lower + 4.0);
    item.price = rng.uniform(inst.prices().z_lower, hi);
    offers.push_back(std::move(item));
  }
  return Menu::with_items(inst, std::move(offers));
}

}  // namespace screenopt::testing
