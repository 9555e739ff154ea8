// Randomized invariants. Generators are plain seeded loops so failures
// reproduce from the printed seed.

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "screenopt/assumptions.hpp"
#include "screenopt/gconvex.hpp"
#include "screenopt/io/report_io.hpp"
#include "screenopt/solver.hpp"

using namespace screenopt;
using namespace screenopt::testing;

namespace {

struct Triple {
  Vec x, y;
  double u;
};

/// x in the agent box, y in the product box, u strictly inside the
/// attainable range [G(x, y, cap), G(x, y, z_lower)].
Triple draw_triple(const ProblemInstance& inst, Rng& rng) {
  const Box& xb = inst.agents().bounds();
  const Box& yb = inst.product_box();
  Triple t;
  for (std::size_t d = 0; d < xb.dim(); ++d) t.x.push_back(rng.uniform(xb.lower[d], xb.upper[d]));
  for (std::size_t d = 0; d < yb.dim(); ++d) t.y.push_back(rng.uniform(yb.lower[d], yb.upper[d]));
  const double hi = eval_g(inst, t.x, t.y, inst.prices().z_lower);
  const double lo = eval_g(inst, t.x, t.y, inst.price_cap());
  t.u = rng.uniform(lo, hi);
  return t;
}

}  // namespace

TEST(Property, ClosedFormInverseIsExact) {
  for (auto f : {Family::quasilinear, Family::paper_coercive}) {
    const auto inst = family_instance(f);
    ASSERT_TRUE(inst.utility().has_closed_h());
    Rng rng(100 + static_cast<int>(f));
    for (int k = 0; k < 1000; ++k) {
      const auto t = draw_triple(inst, rng);
      const double z = invert_price_h(inst, t.x, t.y, t.u);
      ASSERT_LE(std::abs(eval_g(inst, t.x, t.y, z) - t.u), 1e-10) << family_name(f) << " sample " << k;
    }
  }
}

TEST(Property, InverseIsAntitoneInUtility) {
  for (auto f : all_families()) {
    const auto inst = family_instance(f);
    Rng rng(200 + static_cast<int>(f));
    for (int k = 0; k < 300; ++k) {
      auto t = draw_triple(inst, rng);
      const double u2 = t.u + rng.uniform(1e-3, 0.5);
      const auto z1 = try_invert_price_h(inst, t.x, t.y, t.u);
      const auto z2 = try_invert_price_h(inst, t.x, t.y, u2);
      if (!z1 || !z2) continue;
      ASSERT_GT(*z1, *z2) << family_name(f) << " sample " << k;
    }
  }
}

TEST(Property, ReservationNondecreasingWhenA3Holds) {
  for (auto f : all_families()) {
    // A nonzero outside product makes the check meaningful.
    const auto base = family_instance(f);
    const ProblemInstance inst(base.agents(), base.utility(), base.profit(), base.prices(),
                               OutsideOption{{0.5, 1.0}, 0.2}, base.product_box());
    if (check_type_monotonicity(inst, 256, 0).status == CheckStatus::fail) continue;
    SCOPED_TRACE(family_name(f));
    EXPECT_TRUE(is_nondecreasing(inst, inst.reservation()).nondecreasing);
  }
}

TEST(Property, ValidatorIsPure) {
  for (auto f : all_families()) {
    const auto inst = family_instance(f, 3);
    const auto a = io::dump(io::to_json(validate_assumptions(inst, 150, 8)));
    const auto b = io::dump(io::to_json(validate_assumptions(inst, 150, 8)));
    EXPECT_EQ(a, b) << family_name(f);
  }
}

TEST(Property, BestResponseAllocationsAreIncentiveCompatible) {
  for (auto f : all_families()) {
    const auto inst = family_instance(f, 4);
    Rng rng(300 + static_cast<int>(f));
    for (int k = 0; k < 25; ++k) {
      const Menu m = random_menu(inst, rng, 1 + rng.index(4));
      const auto r = aggregate_profit(inst, m);
      const auto u = g_envelope(inst, m);
      ASSERT_TRUE(is_incentive_compatible(inst, r.allocation).compatible) << family_name(f) << " menu " << k;
      ASSERT_TRUE(participation_violations(inst, u).empty());
      std::vector<Vec> cand;
      for (const auto& item : m.items) cand.push_back(item.product);
      ASSERT_TRUE(is_g_convex(inst, u, cand).convex) << family_name(f) << " menu " << k;
    }
  }
}

TEST(Property, AggregateProfitIndependentOfWorkers) {
  const auto inst = family_instance(Family::wealth_scaled, 9);
  Executor pool(3);
  Rng rng(4);
  for (int k = 0; k < 10; ++k) {
    const Menu m = random_menu(inst, rng, 3);
    EXPECT_EQ(aggregate_profit(inst, m).profit, aggregate_profit(inst, m, pool).profit);
  }
}

TEST(Property, RoundTripThroughAssignment) {
  for (auto f : all_families()) {
    const auto inst = family_instance(f, 4);
    Rng rng(400 + static_cast<int>(f));
    for (int k = 0; k < 25; ++k) {
      const Menu m = random_menu(inst, rng, 3);
      const auto r = aggregate_profit(inst, m);
      const auto again = aggregate_profit(inst, menu_from_assignment(inst, r.allocation));
      ASSERT_NEAR(again.profit, r.profit, 1e-8);
      for (std::size_t i = 0; i < inst.agent_count(); ++i)
        ASSERT_NEAR(again.allocation[i].utility, r.allocation[i].utility, 1e-8);
    }
  }
}
