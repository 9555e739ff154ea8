#pragma once

// Problem instances for discretized screening: agent grids, utility families
// with their price inversion, profit functions and the outside option.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "screenopt/errors.hpp"

namespace screenopt {

using Vec = std::vector<double>;
using ConstVec = std::span<const double>;

/// Named numeric parameters of a family, kept for export and diagnostics.
using ParamList = std::vector<std::pair<std::string, Vec>>;

/// Evenly spaced axis: count points from min to max inclusive.
struct AxisGrid {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 1;

  double at(std::size_t k) const;
};

/// Axis-aligned box in R^d with closed bounds.
struct Box {
  Vec lower;
  Vec upper;

  std::size_t dim() const { return lower.size(); }
  bool contains(ConstVec p, double tol = 1e-12) const;
  double max_width() const;
};

/// Finite agent population: distinct type vectors with probability masses.
class AgentGrid {
 public:
  AgentGrid(std::vector<Vec> points, Vec weights);

  /// Cartesian product of the axes, uniform weights, last axis fastest.
  static AgentGrid product(const std::vector<AxisGrid>& axes);

  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return dim_; }
  ConstVec point(std::size_t i) const { return points_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<Vec>& points() const { return points_; }
  const Vec& weights() const { return weights_; }

  /// Smallest box containing every agent.
  const Box& bounds() const { return bounds_; }

 private:
  std::vector<Vec> points_;
  Vec weights_;
  std::size_t dim_;
  Box bounds_;
};

/// Price range [z_lower, z_upper) with a finite stand-in for an infinite cap.
struct PriceInterval {
  double z_lower = 0.0;
  std::optional<double> z_upper;  // nullopt means +inf
  double numeric_cap = 1.0;

  /// Largest price used in computation: z_upper when finite, else numeric_cap.
  double cap() const { return z_upper ? *z_upper : numeric_cap; }
  void validate() const;
};

/// Dense M x N coefficient matrix for b(x, y) = <x, Q y>.
struct Bilinear {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Vec coeffs;  // row-major

  static Bilinear identity(std::size_t n);
  double operator()(ConstVec x, ConstVec y) const;
  /// d/dx_i of <x, Q y> = (Q y)_i.
  void gradient_x(ConstVec y, std::span<double> out) const;
};

/// f(z) = sum_k c_k z^k.
struct PricePolynomial {
  Vec coeffs;

  double operator()(double z) const;
  double derivative(double z) const;
};

enum class UtilityFamily { quasilinear, paper_coercive, separable_price, custom };

const char* to_string(UtilityFamily family);

using UtilityFn = std::function<double(ConstVec x, ConstVec y, double z)>;
using UtilityGradientFn = std::function<void(ConstVec x, ConstVec y, double z, std::span<double> out)>;

/// Agent utility G(x, y, z) together with what is known about its structure.
class UtilitySpec {
 public:
  /// G = <x, Q y> - z.
  static UtilitySpec quasilinear(Bilinear q);
  /// G = sum_i x_i y_i^2 - z, with M = N = dim.
  static UtilitySpec paper_coercive(std::size_t dim);
  /// G = <x, Q y> - f(z), f strictly increasing.
  static UtilitySpec separable_price(Bilinear q, PricePolynomial f);
  /// Arbitrary evaluator, declared strictly decreasing in z. Without a
  /// gradient, D_x G falls back to central differences.
  static UtilitySpec custom(std::string name, UtilityFn g, UtilityGradientFn dx = {},
                            ParamList params = {},
                            std::optional<std::size_t> agent_dim = std::nullopt,
                            std::optional<std::size_t> product_dim = std::nullopt);

  UtilityFamily family() const { return family_; }
  const std::string& name() const { return name_; }
  const ParamList& params() const { return params_; }
  bool has_closed_h() const;
  bool has_gradient() const;
  std::optional<std::size_t> agent_dim() const { return agent_dim_; }
  std::optional<std::size_t> product_dim() const { return product_dim_; }

  /// Unchecked evaluation of G.
  double value(ConstVec x, ConstVec y, double z) const;
  /// D_x G, closed form when available, else central differences with step
  /// 1e-6 (1 + ||x||).
  void gradient_x(ConstVec x, ConstVec y, double z, std::span<double> out) const;
  /// Closed-form H(x, y, u) when the family has one; no range checks.
  std::optional<double> closed_inverse(ConstVec x, ConstVec y, double u) const;

 private:
  struct Quasilinear {
    Bilinear q;
  };
  struct Coercive {};
  struct Separable {
    Bilinear q;
    PricePolynomial f;
  };
  struct Custom {
    UtilityFn g;
    UtilityGradientFn dx;
  };

  UtilitySpec(UtilityFamily family, std::string name,
              std::variant<Quasilinear, Coercive, Separable, Custom> impl, ParamList params);

  UtilityFamily family_;
  std::string name_;
  std::variant<Quasilinear, Coercive, Separable, Custom> impl_;
  ParamList params_;
  std::optional<std::size_t> agent_dim_;
  std::optional<std::size_t> product_dim_;
};

/// Built-in custom utilities addressable by name from instance files.
///   price_increasing:     G = <x, y> + z        (breaks price monotonicity)
///   wealth_scaled_price:  G = <x, y> - z (1 + kappa sum_i x_i)
UtilitySpec make_custom_utility(const std::string& expression, double kappa = 0.0);

using ProfitFn = std::function<double(ConstVec x, ConstVec y, double z)>;

/// Principal's profit pi(x, y, z) with its declared uniform bounds.
class ProfitSpec {
 public:
  /// pi = z - cost * ||y||^2.
  static ProfitSpec price_minus_quadratic_cost(double cost, double lower_bound);
  /// pi = z - <c, y>.
  static ProfitSpec price_minus_linear_cost(Vec cost, double lower_bound);
  static ProfitSpec custom(std::string name, ProfitFn fn, double lower_bound, ParamList params = {});

  double operator()(ConstVec x, ConstVec y, double z) const { return fn_(x, y, z); }
  const std::string& name() const { return name_; }
  const ParamList& params() const { return params_; }
  double lower_bound() const { return lower_bound_; }
  /// Declared bound on pi + G; probed by the validator when absent.
  const std::optional<double>& joint_bound() const { return joint_bound_; }
  ProfitSpec& with_joint_bound(double c0) {
    joint_bound_ = c0;
    return *this;
  }

 private:
  ProfitSpec(std::string name, ProfitFn fn, double lower_bound, ParamList params)
      : name_(std::move(name)), fn_(std::move(fn)), lower_bound_(lower_bound), params_(std::move(params)) {}

  std::string name_;
  ProfitFn fn_;
  double lower_bound_;
  ParamList params_;
  std::optional<double> joint_bound_;
};

struct OutsideOption {
  Vec y_null;
  double z_null = 0.0;
};

/// Optional constants a user may declare for the growth assumptions; the
/// validator checks declared constants and fits the missing ones.
struct SuperlinearBound {
  double alpha = 2.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double b = 0.0;
};

struct SublinearBound {
  double beta = 1.0;
  double c = 0.0;
  double d = 0.0;
};

struct DeclaredConstants {
  std::optional<SuperlinearBound> price_decay;      // H <= -a1 ||y||_a^a - a2 u + b
  std::optional<double> lipschitz_k;                // ||D_xG(x) - D_xG(x')|| <= k ||x - x'||
  std::optional<SublinearBound> gradient_growth;    // ||D_xG||_1 <= c ||y||_b^b + d
};

/// Immutable screening problem. Construction validates dimensions and the
/// outside option.
class ProblemInstance {
 public:
  ProblemInstance(AgentGrid agents, UtilitySpec utility, ProfitSpec profit, PriceInterval prices,
                  OutsideOption outside, Box product_box, DeclaredConstants declared = {});

  const AgentGrid& agents() const { return agents_; }
  const UtilitySpec& utility() const { return utility_; }
  const ProfitSpec& profit() const { return profit_; }
  const PriceInterval& prices() const { return prices_; }
  const OutsideOption& outside() const { return outside_; }
  const Box& product_box() const { return product_box_; }
  const DeclaredConstants& declared() const { return declared_; }

  std::size_t agent_dim() const { return agents_.dim(); }
  std::size_t product_dim() const { return product_box_.dim(); }
  std::size_t agent_count() const { return agents_.size(); }
  double price_cap() const { return prices_.cap(); }

  /// u_null(x_i) for every grid agent, cached at construction.
  const Vec& reservation() const { return reservation_; }

 private:
  AgentGrid agents_;
  UtilitySpec utility_;
  ProfitSpec profit_;
  PriceInterval prices_;
  OutsideOption outside_;
  Box product_box_;
  DeclaredConstants declared_;
  Vec reservation_;
};

/// Boundary tolerance used for all domain checks.
inline constexpr double kDomainTol = 1e-12;

/// G(x, y, z) with domain checks on every argument.
double eval_g(const ProblemInstance& instance, ConstVec x, ConstVec y, double z);

/// Price z in [z_lower, cap] with G(x, y, z) = u. Closed form where the
/// family has one, otherwise bisection on [z_lower, cap].
double invert_price_h(const ProblemInstance& instance, ConstVec x, ConstVec y, double u);

/// Same as invert_price_h but returns nullopt when u is outside the
/// attainable range instead of throwing.
std::optional<double> try_invert_price_h(const ProblemInstance& instance, ConstVec x, ConstVec y, double u);

/// u_null(x) = G(x, y_null, z_null).
double reservation_utility(const ProblemInstance& instance, ConstVec x);

/// pi(x, y, z), checked for finiteness.
double eval_profit(const ProblemInstance& instance, ConstVec x, ConstVec y, double z);

/// D_x G(x, y, z) written into out (size M).
void utility_gradient_x(const ProblemInstance& instance, ConstVec x, ConstVec y, double z, std::span<double> out);

/// Bisection settings for H. The iteration cap and z tolerance are fixed.
inline constexpr int kBisectionMaxIter = 200;
inline constexpr double kBisectionZTol = 1e-10;

/// Bisection for the price delivering utility u; exposed for tests.
double bisect_price(const UtilitySpec& g, ConstVec x, ConstVec y, double u, double z_lo, double z_hi);

}  // namespace screenopt
