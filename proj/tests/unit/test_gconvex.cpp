#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "screenopt/gconvex.hpp"
#include "screenopt/solver.hpp"

using namespace screenopt;
using namespace screenopt::testing;

namespace {

ProblemInstance ql(std::vector<Vec> agents, double z_lower = 0.0) {
  return ProblemInstance(points(std::move(agents)), UtilitySpec::quasilinear(Bilinear::identity(1)),
                         ProfitSpec::custom("price", [](ConstVec, ConstVec, double z) { return z; }, z_lower),
                         prices(z_lower, 10.0), OutsideOption{{0.0}, 0.0}, cube(1, 0.0, 2.0));
}

Menu items(const ProblemInstance& inst, std::vector<std::pair<double, double>> yz) {
  std::vector<MenuItem> offers;
  for (auto [y, z] : yz) offers.push_back({{y}, z, false});
  return Menu::with_items(inst, offers);
}

Allocation assign(const ProblemInstance& inst, std::vector<std::pair<double, double>> yz) {
  Allocation a;
  for (std::size_t i = 0; i < yz.size(); ++i) {
    AgentChoice c;
    c.product = {yz[i].first};
    c.price = yz[i].second;
    c.utility = eval_g(inst, inst.agents().point(i), c.product, c.price);
    c.profit = eval_profit(inst, inst.agents().point(i), c.product, c.price);
    c.item = i;
    a.choices.push_back(c);
  }
  return a;
}

}  // namespace

TEST(Menu, Validation) {
  const auto inst = ql({{0.5}});
  EXPECT_NO_THROW(validate_menu(inst, Menu::null_only(inst)));
  Menu no_null{{{{1.0}, 0.5, false}}};
  EXPECT_THROW(validate_menu(inst, no_null), InvalidInstance);
  Menu two_null{{{{0.0}, 0.0, true}, {{0.0}, 0.0, true}}};
  EXPECT_THROW(validate_menu(inst, two_null), InvalidInstance);
  EXPECT_THROW(validate_menu(inst, items(inst, {{3.0, 0.5}})), InvalidInstance);
  EXPECT_THROW(validate_menu(inst, items(inst, {{1.0, 11.0}})), InvalidInstance);
  EXPECT_THROW(validate_menu(inst, items(inst, {{1.0, 0.5}, {1.0, 0.5}})), InvalidInstance);
  Menu wrong_null{{{{0.5}, 0.0, true}}};
  EXPECT_THROW(validate_menu(inst, wrong_null), InvalidInstance);
}

TEST(Envelope, WorkedValues) {
  const auto inst = ql({{0.5}});
  EXPECT_EQ(g_envelope(inst, Menu::null_only(inst)), (UtilityProfile{0.0}));
  const auto u = g_envelope(inst, items(inst, {{1.0, 0.3}, {2.0, 1.2}}));
  EXPECT_NEAR(u[0], 0.2, 1e-15);

  const ProblemInstance pc(points({{1.0, 1.0}}), UtilitySpec::paper_coercive(2),
                           ProfitSpec::price_minus_quadratic_cost(0.0, -1.0), prices(-1.0, 10.0),
                           OutsideOption{{0.0, 0.0}, 0.0}, cube(2, 0.0, 2.0));
  const auto up = g_envelope(pc, Menu::with_items(pc, {{{1.0, 1.0}, 1.0, false}}));
  EXPECT_DOUBLE_EQ(up[0], 1.0);
}

TEST(Envelope, MonotoneInMenuInclusion) {
  const auto inst = family_instance(Family::separable_price);
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    Menu m = random_menu(inst, rng, 3);
    const auto before = g_envelope(inst, m);
    Menu bigger = m;
    bigger.items.push_back(random_menu(inst, rng, 1).items[1]);
    const auto after = g_envelope(inst, bigger);
    for (std::size_t i = 0; i < before.size(); ++i) EXPECT_GE(after[i], before[i]);
  }
}

TEST(Subdifferential, SingleAgentKeepsAttainableCandidates) {
  const auto inst = ql({{0.7}});
  const std::vector<Vec> cand{{0.0}, {0.5}, {1.0}, {2.0}};
  // y = 0 would need price -0.3 < z_lower, so it is skipped.
  EXPECT_EQ(g_subdifferential(inst, {0.3}, 0, cand), (std::vector<Vec>{{0.5}, {1.0}, {2.0}}));
  // u = 1.3 exceeds the best utility of y = 0, 0.5 and 1 (0, 0.35, 0.7).
  EXPECT_EQ(g_subdifferential(inst, {1.3}, 0, cand), (std::vector<Vec>{{2.0}}));
  EXPECT_TRUE(is_g_convex(inst, {0.3}, cand).convex);
}

TEST(Subdifferential, FlatProfileExcludesSteepProduct) {
  // Agents {0, 1}, u = (0, 0). At agent 0, y = 1 has price H = 0, so agent 1
  // would get 1 > u(1) = 0; y = 0 is supported.
  const auto inst = ql({{0.0}, {1.0}}, -1.0);
  const std::vector<Vec> cand{{0.0}, {1.0}};
  EXPECT_EQ(g_subdifferential(inst, {0.0, 0.0}, 0, cand), (std::vector<Vec>{{0.0}}));
}

TEST(GConvexity, DecreasingProfileIsNotConvex) {
  const auto inst = ql({{0.0}, {1.0}}, -5.0);
  const std::vector<Vec> cand{{0.0}, {0.5}, {1.0}, {2.0}};
  const auto r = is_g_convex(inst, {1.0, 0.0}, cand);
  EXPECT_FALSE(r.convex);
  EXPECT_EQ(r.empty_agents, (std::vector<std::size_t>{0}));
}

TEST(IncentiveCompatibility, SwappedBundlesViolate) {
  const auto inst = ql({{0.3}, {0.9}});
  const Menu m = items(inst, {{1.0, 0.2}, {2.0, 1.0}});
  const auto best = aggregate_profit(inst, m).allocation;
  EXPECT_TRUE(is_incentive_compatible(inst, best).compatible);
  // Agent 0.3 picks (1, 0.2): u = 0.1; agent 0.9 picks (2, 1.0): u = 0.8.
  ASSERT_EQ(best[0].product, (Vec{1.0}));
  ASSERT_EQ(best[1].product, (Vec{2.0}));

  const auto swapped = assign(inst, {{2.0, 1.0}, {1.0, 0.2}});
  const auto r = is_incentive_compatible(inst, swapped);
  EXPECT_FALSE(r.compatible);
  // Agent 0.3 holds u = -0.4 but would get 0.1; agent 0.9 holds 0.7, would get 0.8.
  ASSERT_TRUE(r.violating_pair.has_value());
  EXPECT_EQ(*r.violating_pair, (std::pair<std::size_t, std::size_t>{0, 1}));
  EXPECT_NEAR(r.violation, 0.5, 1e-12);
}

TEST(IncentiveCompatibility, SingleAgentVacuous) {
  const auto inst = ql({{0.4}});
  EXPECT_TRUE(is_incentive_compatible(inst, assign(inst, {{2.0, 5.0}})).compatible);
}

TEST(MenuFromAssignment, SharedProductMergesAndNullLast) {
  const auto inst = ql({{0.3}, {0.9}});
  const Menu m = menu_from_assignment(inst, assign(inst, {{1.5, 0.7}, {1.5, 0.7}}));
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.items[0].product, (Vec{1.5}));
  EXPECT_EQ(m.items[0].price, 0.7);
  EXPECT_TRUE(m.items[1].is_null);
  EXPECT_NO_THROW(validate_menu(inst, m));
}

TEST(MenuFromAssignment, DistinctProductsAndInconsistentPrices) {
  const auto inst = ql({{0.3}, {0.9}});
  EXPECT_EQ(menu_from_assignment(inst, assign(inst, {{0.5, 0.1}, {1.5, 0.9}})).size(), 3u);
  EXPECT_THROW(menu_from_assignment(inst, assign(inst, {{1.0, 0.5}, {1.0, 0.9}})), InconsistentPrice);
  // An agent on the outside option does not add an item.
  EXPECT_EQ(menu_from_assignment(inst, assign(inst, {{0.0, 0.0}, {1.5, 0.9}})).size(), 2u);
}

TEST(Nondecreasing, Cases) {
  const auto inst = ql({{0.0}, {1.0}});
  const auto down = is_nondecreasing(inst, {0.0, -1.0});
  EXPECT_FALSE(down.nondecreasing);
  EXPECT_EQ(*down.witness, (std::pair<std::size_t, std::size_t>{0, 1}));
  EXPECT_DOUBLE_EQ(down.violation, 1.0);
  EXPECT_TRUE(is_nondecreasing(inst, {2.0, 2.0}).nondecreasing);
  EXPECT_TRUE(is_nondecreasing(inst, {0.0, 1e-13 - 1e-13}).nondecreasing);
}

TEST(Nondecreasing, AntichainThrows) {
  const ProblemInstance inst(points({{0.0, 1.0}, {1.0, 0.0}}), UtilitySpec::paper_coercive(2),
                             ProfitSpec::price_minus_quadratic_cost(0.0, -1.0), prices(-1.0, 10.0),
                             OutsideOption{{0.0, 0.0}, 0.0}, cube(2, 0.0, 2.0));
  EXPECT_THROW(is_nondecreasing(inst, {0.0, 0.0}), UnorderedGrid);
  // One agent: nothing to compare, nothing to violate.
  EXPECT_TRUE(is_nondecreasing(ql({{0.5}}), {3.0}).nondecreasing);
}

TEST(SubdifferentialRadius, Cases) {
  const auto inst = ql({{0.5}});
  const Menu zero_only = Menu::null_only(inst);
  const auto u0 = g_envelope(inst, zero_only);
  EXPECT_EQ(subdifferential_radius(inst, u0, {{0.0}}, {0}), 0.0);

  const Menu small = items(inst, {{1.0, 0.5}});
  const auto u = g_envelope(inst, small);
  const auto cand = default_candidates(small, aggregate_profit(inst, small).allocation);
  EXPECT_DOUBLE_EQ(subdifferential_radius(inst, u, cand, {0}), 1.0);
}

TEST(Participation, ReportsAgentsBelowReservation) {
  const auto inst = ql({{0.3}, {0.9}});
  EXPECT_TRUE(participation_violations(inst, {0.0, 0.1}).empty());
  EXPECT_EQ(participation_violations(inst, {-0.1, 0.0}), (std::vector<std::size_t>{0}));
  EXPECT_TRUE(participation_violations(inst, {-5e-10, 0.0}).empty());
}
