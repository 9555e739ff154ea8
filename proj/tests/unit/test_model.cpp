#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "screenopt/model.hpp"

using namespace screenopt;
using namespace screenopt::testing;

namespace {

ProblemInstance quasilinear_1d() {
  return ProblemInstance(points({{0.0}, {0.5}, {1.0}}), UtilitySpec::quasilinear(Bilinear::identity(1)),
                         ProfitSpec::price_minus_quadratic_cost(0.5, -10.0), prices(0.0, 10.0),
                         OutsideOption{{0.0}, 0.0}, cube(1, 0.0, 2.0));
}

ProblemInstance coercive_2d() {
  return ProblemInstance(points({{1.0, 2.0}, {0.5, 0.5}}), UtilitySpec::paper_coercive(2),
                         ProfitSpec::price_minus_quadratic_cost(0.5, -40.0), PriceInterval{-1.0, {}, 100.0},
                         OutsideOption{{0.0, 0.0}, 0.0}, cube(2, 0.0, 6.0));
}

// f(z) = z^3 with y_null = 1, z_null = 1.
ProblemInstance cubic_price() {
  return ProblemInstance(points({{1.0}, {2.0}}),
                         UtilitySpec::separable_price(Bilinear::identity(1), PricePolynomial{{0.0, 0.0, 0.0, 1.0}}),
                         ProfitSpec::price_minus_quadratic_cost(0.0, 0.0), prices(0.0, 2.0),
                         OutsideOption{{1.0}, 1.0}, cube(1, 0.0, 2.0));
}

}  // namespace

TEST(AgentGrid, RejectsBadWeightsAndDuplicates) {
  EXPECT_THROW(AgentGrid({}, {}), InvalidInstance);
  EXPECT_THROW(AgentGrid({{0.0}, {1.0}}, {0.5, 0.6}), InvalidInstance);
  EXPECT_THROW(AgentGrid({{0.0}, {1.0}}, {1.5, -0.5}), InvalidInstance);
  EXPECT_THROW(AgentGrid({{0.0}, {0.0}}, {0.5, 0.5}), InvalidInstance);
  EXPECT_THROW(AgentGrid({{0.0}, {1.0, 2.0}}, {0.5, 0.5}), InvalidInstance);
  EXPECT_THROW(AgentGrid({{std::nan("")}}, {1.0}), InvalidInstance);
  EXPECT_NO_THROW(AgentGrid({{0.0}, {1.0}}, {0.25, 0.75}));
}

TEST(AgentGrid, ProductOrderAndBounds) {
  const AgentGrid g = AgentGrid::product({{0.0, 1.0, 2}, {5.0, 7.0, 3}});
  ASSERT_EQ(g.size(), 6u);
  EXPECT_EQ(g.points()[1], (Vec{0.0, 6.0}));
  EXPECT_EQ(g.points()[3], (Vec{1.0, 5.0}));
  EXPECT_DOUBLE_EQ(g.weight(4), 1.0 / 6.0);
  EXPECT_EQ(g.bounds().lower, (Vec{0.0, 5.0}));
  EXPECT_EQ(g.bounds().upper, (Vec{1.0, 7.0}));
}

TEST(PriceInterval, Validation) {
  EXPECT_THROW((PriceInterval{1.0, 1.0, 2.0}).validate(), InvalidInstance);
  EXPECT_THROW((PriceInterval{1.0, {}, 0.5}).validate(), InvalidInstance);
  EXPECT_THROW((PriceInterval{0.0, {}, INFINITY}).validate(), InvalidInstance);
  const PriceInterval p{0.0, {}, 50.0};
  EXPECT_NO_THROW(p.validate());
  EXPECT_EQ(p.cap(), 50.0);
  EXPECT_EQ((PriceInterval{0.0, 3.0, 50.0}).cap(), 3.0);
}

TEST(ProblemInstance, RejectsInconsistentParts) {
  EXPECT_THROW(ProblemInstance(points({{0.5}}), UtilitySpec::quasilinear(Bilinear::identity(1)),
                               ProfitSpec::price_minus_quadratic_cost(0.5, 0), prices(0, 1),
                               OutsideOption{{3.0}, 0.0}, cube(1, 0, 2)),
               InvalidInstance);
  EXPECT_THROW(ProblemInstance(points({{0.5}}), UtilitySpec::quasilinear(Bilinear::identity(1)),
                               ProfitSpec::price_minus_quadratic_cost(0.5, 0), prices(0, 1),
                               OutsideOption{{0.0}, 2.0}, cube(1, 0, 2)),
               InvalidInstance);
  EXPECT_THROW(ProblemInstance(points({{0.5}}), UtilitySpec::quasilinear(Bilinear::identity(2)),
                               ProfitSpec::price_minus_quadratic_cost(0.5, 0), prices(0, 1),
                               OutsideOption{{0.0}, 0.0}, cube(1, 0, 2)),
               InvalidInstance);
}

TEST(EvalG, WorkedValues) {
  const auto q = quasilinear_1d();
  EXPECT_NEAR(eval_g(q, Vec{0.5}, Vec{1.0}, 0.3), 0.2, 1e-15);

  const auto c = coercive_2d();
  EXPECT_DOUBLE_EQ(eval_g(c, Vec{1.0, 2.0}, Vec{1.0, 1.0}, 3.0), 0.0);

  const auto s = cubic_price();
  EXPECT_DOUBLE_EQ(eval_g(s, Vec{1.0}, Vec{2.0}, 1.0), 1.0);
}

TEST(EvalG, DomainErrors) {
  const auto q = quasilinear_1d();
  EXPECT_THROW(eval_g(q, Vec{1.5}, Vec{1.0}, 0.3), DomainError);
  EXPECT_THROW(eval_g(q, Vec{0.5}, Vec{2.5}, 0.3), DomainError);
  EXPECT_THROW(eval_g(q, Vec{0.5}, Vec{1.0}, -0.1), DomainError);
  EXPECT_THROW(eval_g(q, Vec{0.5}, Vec{1.0}, 10.5), DomainError);
  EXPECT_NO_THROW(eval_g(q, Vec{0.5}, Vec{1.0}, 10.0));
}

TEST(EvalG, NonFiniteCustomEvaluator) {
  const ProblemInstance inst(points({{0.5}}),
                             UtilitySpec::custom("broken", [](ConstVec, ConstVec, double z) {
                               return z > 1.0 ? std::nan("") : -z;
                             }),
                             ProfitSpec::price_minus_quadratic_cost(0.0, 0.0), prices(0, 2), OutsideOption{{0.0}, 0.0},
                             cube(1, 0, 1));
  EXPECT_THROW(eval_g(inst, Vec{0.5}, Vec{0.0}, 1.5), NonFiniteResult);
}

TEST(InvertPriceH, WorkedValues) {
  const auto q = quasilinear_1d();
  // Reuse the 1-D quasilinear instance; x = 1 lies on its grid.
  EXPECT_NEAR(invert_price_h(q, Vec{1.0}, Vec{2.0}, 1.5), 0.5, 1e-15);

  const auto c = coercive_2d();
  EXPECT_NEAR(invert_price_h(c, Vec{1.0, 2.0}, Vec{1.0, 1.0}, 0.0), 3.0, 1e-15);

  const auto s = cubic_price();
  const double z = invert_price_h(s, Vec{1.0}, Vec{2.0}, 1.0);
  EXPECT_NEAR(z, 1.0, 1e-8);
  EXPECT_NEAR(eval_g(s, Vec{1.0}, Vec{2.0}, z), 1.0, 1e-8);
}

TEST(InvertPriceH, Unattainable) {
  const auto q = quasilinear_1d();
  // Attainable range for x = 1, y = 2 is [2 - 10, 2].
  EXPECT_THROW(invert_price_h(q, Vec{1.0}, Vec{2.0}, 2.5), UnattainableUtility);
  EXPECT_THROW(invert_price_h(q, Vec{1.0}, Vec{2.0}, -8.5), UnattainableUtility);
  EXPECT_FALSE(try_invert_price_h(q, Vec{1.0}, Vec{2.0}, 2.5).has_value());
  EXPECT_NEAR(*try_invert_price_h(q, Vec{1.0}, Vec{2.0}, 2.0), 0.0, 1e-15);

  const auto s = cubic_price();
  EXPECT_THROW(invert_price_h(s, Vec{1.0}, Vec{2.0}, 2.5), UnattainableUtility);
}

TEST(InvertPriceH, MonotonicityViolationDetected) {
  const ProblemInstance inst(points({{0.5}}), make_custom_utility("price_increasing"),
                             ProfitSpec::price_minus_quadratic_cost(0.0, 0.0), prices(0, 2), OutsideOption{{0.0}, 0.0},
                             cube(1, 0, 1));
  EXPECT_THROW(invert_price_h(inst, Vec{0.5}, Vec{1.0}, 1.0), MonotonicityViolation);
}

TEST(BisectPrice, ReachesToleranceAndRespectsBracket) {
  const auto g = UtilitySpec::separable_price(Bilinear::identity(1), PricePolynomial{{0.0, 1.0, 0.0, 1.0}});
  const Vec x{0.7}, y{1.3};
  for (double u : {-8.0, -1.0, 0.0, 0.5, 0.91}) {
    const double z = bisect_price(g, x, y, u, 0.0, 2.0);
    EXPECT_GE(z, 0.0);
    EXPECT_LE(z, 2.0);
    EXPECT_NEAR(g.value(x, y, z), u, 1e-8) << "u=" << u;
  }
}

TEST(Reservation, WorkedValues) {
  const auto q = quasilinear_1d();
  for (double x : {0.0, 0.5, 1.0}) EXPECT_EQ(reservation_utility(q, Vec{x}), 0.0);
  EXPECT_EQ(reservation_utility(coercive_2d(), Vec{1.0, 2.0}), 0.0);
  EXPECT_DOUBLE_EQ(reservation_utility(cubic_price(), Vec{2.0}), 1.0);
  EXPECT_EQ(cubic_price().reservation(), (Vec{0.0, 1.0}));
}

TEST(Gradient, ClosedFormsAndDifferences) {
  Vec out(2);
  UtilitySpec::paper_coercive(2).gradient_x(Vec{0.3, 0.4}, Vec{2.0, 3.0}, 1.0, out);
  EXPECT_EQ(out, (Vec{4.0, 9.0}));

  Bilinear q{2, 2, {1.0, 2.0, 3.0, 4.0}};
  UtilitySpec::quasilinear(q).gradient_x(Vec{0.0, 0.0}, Vec{1.0, 1.0}, 0.0, out);
  EXPECT_EQ(out, (Vec{3.0, 7.0}));

  // wealth_scaled_price has no closed gradient: D_x G = y - kappa z.
  const auto w = make_custom_utility("wealth_scaled_price", 0.5);
  EXPECT_FALSE(w.has_gradient());
  w.gradient_x(Vec{0.3, 0.6}, Vec{1.0, 2.0}, 0.8, out);
  EXPECT_NEAR(out[0], 0.6, 1e-7);
  EXPECT_NEAR(out[1], 1.6, 1e-7);
}

TEST(Profit, Specs) {
  const auto p = ProfitSpec::price_minus_quadratic_cost(0.5, -1.0);
  EXPECT_DOUBLE_EQ(p(Vec{0.0}, Vec{2.0}, 3.0), 1.0);
  const auto l = ProfitSpec::price_minus_linear_cost({0.1, 0.2}, -1.0);
  EXPECT_DOUBLE_EQ(l(Vec{0.0, 0.0}, Vec{1.0, 2.0}, 1.0), 0.5);
  EXPECT_FALSE(l.joint_bound().has_value());
  auto c = ProfitSpec::price_minus_quadratic_cost(0.5, -1.0);
  c.with_joint_bound(3.0);
  EXPECT_EQ(c.joint_bound(), 3.0);
}

TEST(CustomUtility, UnknownExpression) {
  EXPECT_THROW(make_custom_utility("nope"), InvalidInstance);
  EXPECT_EQ(make_custom_utility("price_increasing").family(), UtilityFamily::custom);
}
