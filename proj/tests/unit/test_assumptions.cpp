#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "screenopt/assumptions.hpp"

using namespace screenopt;
using namespace screenopt::testing;

TEST(Assumptions, RejectsTinySampleBudget) {
  EXPECT_THROW(validate_assumptions(single_agent(), 99, 0), std::invalid_argument);
}

TEST(Assumptions, PaperCoerciveFamilyPassesEverything) {
  const auto inst = family_instance(Family::paper_coercive);
  const auto report = validate_assumptions(inst, 500, 3);
  for (const auto& c : report.checks) EXPECT_NE(c.status, CheckStatus::fail) << "A" << c.id << ": " << c.detail;
  EXPECT_EQ(report.check(7).status, CheckStatus::pass);
  EXPECT_TRUE(report.all_pass());
  ASSERT_FALSE(report.coercivity.empty());
}

TEST(Assumptions, PriceIncreasingFailsA2WithWitness) {
  const ProblemInstance inst(square_grid(0.1, 0.9, 3), make_custom_utility("price_increasing"),
                             ProfitSpec::price_minus_quadratic_cost(0.5, -4.0), prices(0.0, 10.0),
                             OutsideOption{{0.0, 0.0}, 0.0}, cube(2, 0.0, 2.0));
  const auto report = validate_assumptions(inst, 200, 0);
  const auto& a2 = report.check(2);
  ASSERT_EQ(a2.status, CheckStatus::fail);
  ASSERT_TRUE(a2.witness.has_value());
  const auto& w = *a2.witness;
  ASSERT_TRUE(w.z && w.z_alt);
  EXPECT_LT(*w.z, *w.z_alt);
  // The witness reproduces: G grows between z and z'.
  const double gain = eval_g(inst, w.x, w.y, *w.z_alt) - eval_g(inst, w.x, w.y, *w.z);
  EXPECT_GT(gain, kAssumptionTol);
  EXPECT_NEAR(gain, w.violation, 1e-12);
  EXPECT_FALSE(report.all_pass());
}

TEST(Assumptions, CoercivityTableForOneDimensionalQuasilinear) {
  // G = x y - z with y in [-10, 10]: sum |D_x G| = |y| exactly.
  const ProblemInstance inst(points({{0.2}, {0.8}}), UtilitySpec::quasilinear(Bilinear::identity(1)),
                             ProfitSpec::price_minus_quadratic_cost(0.0, 0.0), prices(0.0, 20.0),
                             OutsideOption{{0.0}, 0.0}, cube(1, -10.0, 10.0));
  const auto report = validate_assumptions(inst, 200, 1);
  ASSERT_EQ(report.coercivity.size(), 17u);
  EXPECT_EQ(report.coercivity.front().radius, 0.0);
  EXPECT_EQ(report.coercivity.back().radius, 10.0);
  for (const auto& e : report.coercivity) EXPECT_NEAR(e.min_gradient_l1, e.radius, 1e-12);
  EXPECT_EQ(report.check(7).status, CheckStatus::pass);
  const auto r = report.coercivity_radius(4.9);
  ASSERT_TRUE(r.has_value());
  EXPECT_DOUBLE_EQ(*r, 5.0);
  EXPECT_FALSE(report.coercivity_radius(11.0).has_value());
}

TEST(Assumptions, TypeDecreasingFailsA3) {
  const ProblemInstance inst(square_grid(0.1, 0.9, 3),
                             UtilitySpec::quasilinear(Bilinear{2, 2, {-1.0, 0.0, 0.0, -1.0}}),
                             ProfitSpec::price_minus_quadratic_cost(0.5, -9.0), prices(-5.0, 5.0),
                             OutsideOption{{0.0, 0.0}, 0.0}, cube(2, 0.0, 2.0));
  const auto a3 = check_type_monotonicity(inst, 256, 0);
  ASSERT_EQ(a3.status, CheckStatus::fail);
  ASSERT_TRUE(a3.witness.has_value());
  EXPECT_GT(eval_g(inst, a3.witness->x, a3.witness->y, *a3.witness->z) -
                eval_g(inst, a3.witness->x_alt, a3.witness->y, *a3.witness->z),
            kAssumptionTol);
}

TEST(Assumptions, ProfitLowerBoundViolation) {
  // pi = z - y^2/2 reaches -2 on y in [0, 2], z = 0, below the declared -1.
  const ProblemInstance inst(points({{0.5}, {1.0}}), UtilitySpec::quasilinear(Bilinear::identity(1)),
                             ProfitSpec::price_minus_quadratic_cost(0.5, -1.0), prices(0.0, 10.0),
                             OutsideOption{{0.0}, 0.0}, cube(1, 0.0, 2.0));
  const auto report = validate_assumptions(inst, 300, 0);
  EXPECT_EQ(report.check(9).status, CheckStatus::fail);
  ASSERT_TRUE(report.check(9).witness.has_value());
}

TEST(Assumptions, DeclaredJointBoundChecked) {
  auto make = [](double c0) {
    auto profit = ProfitSpec::price_minus_quadratic_cost(0.5, -2.0);
    profit.with_joint_bound(c0);
    return ProblemInstance(points({{0.5}, {1.0}}), UtilitySpec::quasilinear(Bilinear::identity(1)),
                           std::move(profit), prices(0.0, 10.0), OutsideOption{{0.0}, 0.0}, cube(1, 0.0, 2.0));
  };
  // pi + G = x y - y^2 / 2 <= 1/2 on this domain.
  EXPECT_EQ(validate_assumptions(make(0.6), 200, 0).check(10).status, CheckStatus::pass);
  EXPECT_EQ(validate_assumptions(make(0.1), 200, 0).check(10).status, CheckStatus::fail);
}

TEST(Assumptions, DeterministicInSeed) {
  const auto inst = family_instance(Family::separable_price);
  const auto a = validate_assumptions(inst, 300, 42);
  Executor pool(4);
  const auto b = validate_assumptions(inst, 300, 42, pool);
  for (int id = 1; id <= 10; ++id) {
    EXPECT_EQ(a.check(id).status, b.check(id).status);
    EXPECT_EQ(a.check(id).detail, b.check(id).detail);
  }
  EXPECT_EQ(a.lipschitz_k, b.lipschitz_k);
  EXPECT_EQ(a.price_decay.b, b.price_decay.b);
  EXPECT_EQ(a.joint_bound_c0, b.joint_bound_c0);
}

TEST(Assumptions, LipschitzOfBilinearGradientIsZero) {
  // D_x G = Q y does not depend on x.
  const auto report = validate_assumptions(family_instance(Family::quasilinear), 200, 0);
  EXPECT_NEAR(report.lipschitz_k, 0.0, 1e-12);
  EXPECT_EQ(report.check(5).status, CheckStatus::pass);
}
