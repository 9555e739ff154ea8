#include "screenopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace screenopt {

namespace {

std::string format_vec(ConstVec v) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

double norm2(ConstVec v) {
  double s = 0.0;
  for (double a : v) s += a * a;
  return std::sqrt(s);
}

}  // namespace

double AxisGrid::at(std::size_t k) const {
  if (count <= 1) return min;
  if (k + 1 == count) return max;
  return min + (max - min) * static_cast<double>(k) / static_cast<double>(count - 1);
}

bool Box::contains(ConstVec p, double tol) const {
  if (p.size() != lower.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!(p[i] >= lower[i] - tol && p[i] <= upper[i] + tol)) return false;
  return true;
}

double Box::max_width() const {
  double w = 0.0;
  for (std::size_t i = 0; i < lower.size(); ++i) w = std::max(w, upper[i] - lower[i]);
  return w;
}

// ---------------------------------------------------------------------------
// AgentGrid

AgentGrid::AgentGrid(std::vector<Vec> points, Vec weights)
    : points_(std::move(points)), weights_(std::move(weights)), dim_(0) {
  if (points_.empty()) throw InvalidInstance("agent grid needs at least one point");
  dim_ = points_.front().size();
  if (dim_ == 0) throw InvalidInstance("agent points must have positive dimension");
  if (weights_.size() != points_.size())
    throw InvalidInstance("agent grid has " + std::to_string(points_.size()) + " points but " +
                          std::to_string(weights_.size()) + " weights");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].size() != dim_)
      throw InvalidInstance("agent point " + std::to_string(i) + " has length " +
                            std::to_string(points_[i].size()) + ", expected " + std::to_string(dim_));
    for (double c : points_[i])
      if (!std::isfinite(c)) throw InvalidInstance("agent point " + std::to_string(i) + " is not finite");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_[i]) || weights_[i] < 0.0)
      throw InvalidInstance("agent weight " + std::to_string(i) + " must be finite and nonnegative");
    total += weights_[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "agent weights sum to " << total << ", expected 1";
    throw InvalidInstance(os.str());
  }

  std::vector<std::size_t> order(points_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points_[a] < points_[b]; });
  for (std::size_t k = 1; k < order.size(); ++k)
    if (points_[order[k]] == points_[order[k - 1]])
      throw InvalidInstance("agent points " + std::to_string(order[k - 1]) + " and " + std::to_string(order[k]) +
                            " coincide");

  bounds_.lower = points_.front();
  bounds_.upper = points_.front();
  for (const auto& p : points_)
    for (std::size_t d = 0; d < dim_; ++d) {
      bounds_.lower[d] = std::min(bounds_.lower[d], p[d]);
      bounds_.upper[d] = std::max(bounds_.upper[d], p[d]);
    }
}

AgentGrid AgentGrid::product(const std::vector<AxisGrid>& axes) {
  if (axes.empty()) throw InvalidInstance("agent grid needs at least one axis");
  std::size_t total = 1;
  for (const auto& a : axes) {
    if (a.count == 0) throw InvalidInstance("agent grid axis count must be positive");
    if (a.count > 1 && !(a.max > a.min)) throw InvalidInstance("agent grid axis needs max > min");
    total *= a.count;
  }
  std::vector<Vec> points;
  points.reserve(total);
  std::vector<std::size_t> idx(axes.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    Vec p(axes.size());
    for (std::size_t d = 0; d < axes.size(); ++d) p[d] = axes[d].at(idx[d]);
    points.push_back(std::move(p));
    for (std::size_t d = axes.size(); d-- > 0;) {
      if (++idx[d] < axes[d].count) break;
      idx[d] = 0;
    }
  }
  Vec weights(total, 1.0 / static_cast<double>(total));
  return AgentGrid(std::move(points), std::move(weights));
}

void PriceInterval::validate() const {
  if (!std::isfinite(z_lower)) throw InvalidInstance("prices.z_lower must be finite");
  if (z_upper && !(*z_upper > z_lower)) throw InvalidInstance("prices.z_upper must exceed z_lower");
  if (!std::isfinite(numeric_cap)) throw InvalidInstance("prices.numeric_cap must be finite");
  if (!(numeric_cap > z_lower)) throw InvalidInstance("prices.numeric_cap must exceed z_lower");
  if (z_upper && !std::isfinite(*z_upper)) throw InvalidInstance("prices.z_upper must be finite or inf");
}

// ---------------------------------------------------------------------------
// Bilinear / polynomial

Bilinear Bilinear::identity(std::size_t n) {
  Bilinear q{n, n, Vec(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) q.coeffs[i * n + i] = 1.0;
  return q;
}

double Bilinear::operator()(ConstVec x, ConstVec y) const {
  double s = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < cols; ++j) row += coeffs[i * cols + j] * y[j];
    s += x[i] * row;
  }
  return s;
}

void Bilinear::gradient_x(ConstVec y, std::span<double> out) const {
  for (std::size_t i = 0; i < rows; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < cols; ++j) row += coeffs[i * cols + j] * y[j];
    out[i] = row;
  }
}

double PricePolynomial::operator()(double z) const {
  double s = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) s = s * z + coeffs[k];
  return s;
}

double PricePolynomial::derivative(double z) const {
  double s = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 1;) s = s * z + static_cast<double>(k) * coeffs[k];
  return s;
}

// ---------------------------------------------------------------------------
// UtilitySpec

const char* to_string(UtilityFamily family) {
  switch (family) {
    case UtilityFamily::quasilinear: return "quasilinear";
    case UtilityFamily::paper_coercive: return "paper_coercive";
    case UtilityFamily::separable_price: return "separable_price";
    case UtilityFamily::custom: return "custom";
  }
  return "unknown";
}

UtilitySpec::UtilitySpec(UtilityFamily family, std::string name,
                         std::variant<Quasilinear, Coercive, Separable, Custom> impl, ParamList params)
    : family_(family), name_(std::move(name)), impl_(std::move(impl)), params_(std::move(params)) {}

UtilitySpec UtilitySpec::quasilinear(Bilinear q) {
  if (q.rows == 0 || q.cols == 0 || q.coeffs.size() != q.rows * q.cols)
    throw InvalidInstance("quasilinear utility needs a nonempty rows x cols matrix");
  ParamList params{{"q", q.coeffs}};
  UtilitySpec spec(UtilityFamily::quasilinear, "quasilinear", Quasilinear{q}, std::move(params));
  spec.agent_dim_ = q.rows;
  spec.product_dim_ = q.cols;
  return spec;
}

UtilitySpec UtilitySpec::paper_coercive(std::size_t dim) {
  if (dim == 0) throw InvalidInstance("paper_coercive utility needs positive dimension");
  UtilitySpec spec(UtilityFamily::paper_coercive, "paper_coercive", Coercive{}, {});
  spec.agent_dim_ = dim;
  spec.product_dim_ = dim;
  return spec;
}

UtilitySpec UtilitySpec::separable_price(Bilinear q, PricePolynomial f) {
  if (q.rows == 0 || q.cols == 0 || q.coeffs.size() != q.rows * q.cols)
    throw InvalidInstance("separable_price utility needs a nonempty rows x cols matrix");
  if (f.coeffs.size() < 2) throw InvalidInstance("separable_price needs a non-constant price polynomial");
  ParamList params{{"q", q.coeffs}, {"f_coeffs", f.coeffs}};
  UtilitySpec spec(UtilityFamily::separable_price, "separable_price", Separable{q, std::move(f)}, std::move(params));
  spec.agent_dim_ = q.rows;
  spec.product_dim_ = q.cols;
  return spec;
}

UtilitySpec UtilitySpec::custom(std::string name, UtilityFn g, UtilityGradientFn dx, ParamList params,
                                std::optional<std::size_t> agent_dim, std::optional<std::size_t> product_dim) {
  if (!g) throw InvalidInstance("custom utility needs an evaluator");
  UtilitySpec spec(UtilityFamily::custom, std::move(name), Custom{std::move(g), std::move(dx)}, std::move(params));
  spec.agent_dim_ = agent_dim;
  spec.product_dim_ = product_dim;
  return spec;
}

bool UtilitySpec::has_closed_h() const {
  return family_ == UtilityFamily::quasilinear || family_ == UtilityFamily::paper_coercive;
}

bool UtilitySpec::has_gradient() const {
  if (const auto* c = std::get_if<Custom>(&impl_)) return static_cast<bool>(c->dx);
  return true;
}

double UtilitySpec::value(ConstVec x, ConstVec y, double z) const {
  switch (impl_.index()) {
    case 0: return std::get<Quasilinear>(impl_).q(x, y) - z;
    case 1: {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i] * y[i];
      return s - z;
    }
    case 2: {
      const auto& s = std::get<Separable>(impl_);
      return s.q(x, y) - s.f(z);
    }
    default: return std::get<Custom>(impl_).g(x, y, z);
  }
}

void UtilitySpec::gradient_x(ConstVec x, ConstVec y, double z, std::span<double> out) const {
  switch (impl_.index()) {
    case 0: std::get<Quasilinear>(impl_).q.gradient_x(y, out); return;
    case 1:
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = y[i] * y[i];
      return;
    case 2: std::get<Separable>(impl_).q.gradient_x(y, out); return;
    default: break;
  }
  const auto& c = std::get<Custom>(impl_);
  if (c.dx) {
    c.dx(x, y, z, out);
    return;
  }
  const double h = 1e-6 * (1.0 + norm2(x));
  Vec probe(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = c.g(probe, y, z);
    probe[i] = x[i] - h;
    const double down = c.g(probe, y, z);
    probe[i] = x[i];
    out[i] = (up - down) / (2.0 * h);
  }
}

std::optional<double> UtilitySpec::closed_inverse(ConstVec x, ConstVec y, double u) const {
  switch (impl_.index()) {
    case 0: return std::get<Quasilinear>(impl_).q(x, y) - u;
    case 1: {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i] * y[i];
      return s - u;
    }
    default: return std::nullopt;
  }
}

UtilitySpec make_custom_utility(const std::string& expression, double kappa) {
  auto inner = [](ConstVec x, ConstVec y) {
    if (x.size() != y.size()) throw InvalidInstance("custom utility requires equal agent and product dimensions");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
  };
  if (expression == "price_increasing") {
    return UtilitySpec::custom(
        "price_increasing", [inner](ConstVec x, ConstVec y, double z) { return inner(x, y) + z; },
        [](ConstVec, ConstVec y, double, std::span<double> out) { std::copy(y.begin(), y.end(), out.begin()); });
  }
  if (expression == "wealth_scaled_price") {
    // Left without a closed gradient so D_x G exercises the difference path.
    return UtilitySpec::custom(
        "wealth_scaled_price",
        [inner, kappa](ConstVec x, ConstVec y, double z) {
          double mass = 0.0;
          for (double a : x) mass += a;
          return inner(x, y) - z * (1.0 + kappa * mass);
        },
        {}, ParamList{{"kappa", {kappa}}});
  }
  throw InvalidInstance("unknown custom utility expression '" + expression + "'");
}

// ---------------------------------------------------------------------------
// ProfitSpec

ProfitSpec ProfitSpec::price_minus_quadratic_cost(double cost, double lower_bound) {
  return ProfitSpec(
      "price_minus_quadratic_cost",
      [cost](ConstVec, ConstVec y, double z) {
        double s = 0.0;
        for (double a : y) s += a * a;
        return z - cost * s;
      },
      lower_bound, ParamList{{"cost", {cost}}});
}

ProfitSpec ProfitSpec::price_minus_linear_cost(Vec cost, double lower_bound) {
  ParamList params{{"cost", cost}};
  return ProfitSpec(
      "price_minus_linear_cost",
      [cost = std::move(cost)](ConstVec, ConstVec y, double z) {
        double s = 0.0;
        for (std::size_t i = 0; i < y.size() && i < cost.size(); ++i) s += cost[i] * y[i];
        return z - s;
      },
      lower_bound, std::move(params));
}

ProfitSpec ProfitSpec::custom(std::string name, ProfitFn fn, double lower_bound, ParamList params) {
  if (!fn) throw InvalidInstance("custom profit needs an evaluator");
  return ProfitSpec(std::move(name), std::move(fn), lower_bound, std::move(params));
}

// ---------------------------------------------------------------------------
// ProblemInstance

ProblemInstance::ProblemInstance(AgentGrid agents, UtilitySpec utility, ProfitSpec profit, PriceInterval prices,
                                 OutsideOption outside, Box product_box, DeclaredConstants declared)
    : agents_(std::move(agents)),
      utility_(std::move(utility)),
      profit_(std::move(profit)),
      prices_(prices),
      outside_(std::move(outside)),
      product_box_(std::move(product_box)),
      declared_(declared) {
  prices_.validate();
  const std::size_t n = product_box_.lower.size();
  if (n == 0 || product_box_.upper.size() != n) throw InvalidInstance("product_box needs matching lower/upper bounds");
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(product_box_.lower[i]) || !std::isfinite(product_box_.upper[i]) ||
        product_box_.lower[i] > product_box_.upper[i])
      throw InvalidInstance("product_box axis " + std::to_string(i) + " must be finite with min <= max");
  if (utility_.agent_dim() && *utility_.agent_dim() != agents_.dim())
    throw InvalidInstance("utility expects agent dimension " + std::to_string(*utility_.agent_dim()) +
                          ", grid has " + std::to_string(agents_.dim()));
  if (utility_.product_dim() && *utility_.product_dim() != n)
    throw InvalidInstance("utility expects product dimension " + std::to_string(*utility_.product_dim()) +
                          ", product_box has " + std::to_string(n));
  if (outside_.y_null.size() != n)
    throw InvalidInstance("outside.y_null has length " + std::to_string(outside_.y_null.size()) + ", expected " +
                          std::to_string(n));
  if (!product_box_.contains(outside_.y_null)) throw InvalidInstance("product_box must contain outside.y_null");
  if (!(outside_.z_null >= prices_.z_lower - kDomainTol && outside_.z_null <= price_cap() + kDomainTol))
    throw InvalidInstance("outside.z_null must lie in [z_lower, cap]");

  reservation_.resize(agents_.size());
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    reservation_[i] = utility_.value(agents_.point(i), outside_.y_null, outside_.z_null);
    if (!std::isfinite(reservation_[i]))
      throw InvalidInstance("reservation utility is not finite at agent " + std::to_string(i));
  }
}

// ---------------------------------------------------------------------------
// Operations

namespace {

void check_domain(const ProblemInstance& instance, ConstVec x, ConstVec y, double z) {
  if (!instance.agents().bounds().contains(x, kDomainTol))
    throw DomainError("agent type " + format_vec(x) + " lies outside the agent grid bounds");
  if (!instance.product_box().contains(y, kDomainTol))
    throw DomainError("product " + format_vec(y) + " lies outside product_box");
  if (!(z >= instance.prices().z_lower - kDomainTol && z <= instance.price_cap() + kDomainTol)) {
    std::ostringstream os;
    os.precision(17);
    os << "price " << z << " lies outside [" << instance.prices().z_lower << ", " << instance.price_cap() << "]";
    throw DomainError(os.str());
  }
}

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw NonFiniteResult(std::string(what) + " returned a non-finite value");
  return v;
}

std::optional<double> invert_impl(const ProblemInstance& instance, ConstVec x, ConstVec y, double u) {
  const double lo = instance.prices().z_lower;
  const double hi = instance.price_cap();
  const auto& g = instance.utility();
  if (auto z = g.closed_inverse(x, y, u)) {
    const double slack = kDomainTol * (1.0 + std::abs(*z));
    if (*z < lo - slack || *z > hi + slack) return std::nullopt;
    return std::clamp(*z, lo, hi);
  }
  const double g_lo = checked(g.value(x, y, lo), "utility");
  const double g_hi = checked(g.value(x, y, hi), "utility");
  if (!(g_lo > g_hi)) {
    std::ostringstream os;
    os.precision(17);
    os << "utility is not decreasing in price at x=" << format_vec(x) << ", y=" << format_vec(y) << ": G(z_lower)="
       << g_lo << ", G(cap)=" << g_hi;
    throw MonotonicityViolation(os.str());
  }
  const double slack = kDomainTol * (1.0 + std::abs(u));
  if (u > g_lo + slack || u < g_hi - slack) return std::nullopt;
  return bisect_price(g, x, y, u, lo, hi);
}

}  // namespace

double bisect_price(const UtilitySpec& g, ConstVec x, ConstVec y, double u, double z_lo, double z_hi) {
  const double g_lo = checked(g.value(x, y, z_lo), "utility");
  const double g_hi = checked(g.value(x, y, z_hi), "utility");
  if (!(g_lo > g_hi)) throw MonotonicityViolation("utility is not decreasing across the price bracket");
  if (u >= g_lo) return z_lo;
  if (u <= g_hi) return z_hi;

  const double band = 1e-9 * (1.0 + std::abs(g_lo) + std::abs(g_hi));
  double lo = z_lo;
  double hi = z_hi;
  double best_z = std::abs(g_lo - u) <= std::abs(g_hi - u) ? z_lo : z_hi;
  double best_r = std::min(std::abs(g_lo - u), std::abs(g_hi - u));
  for (int iter = 0; iter < kBisectionMaxIter; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    const double gm = checked(g.value(x, y, mid), "utility");
    if (gm > g_lo + band || gm < g_hi - band)
      throw MonotonicityViolation("utility left its endpoint bracket during bisection; not monotone in price");
    const double r = gm - u;
    if (std::abs(r) < best_r) {
      best_r = std::abs(r);
      best_z = mid;
    }
    if (r == 0.0) break;
    if (r > 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= kBisectionZTol && best_r <= kBisectionZTol) break;
  }
  return best_z;
}

double eval_g(const ProblemInstance& instance, ConstVec x, ConstVec y, double z) {
  check_domain(instance, x, y, z);
  return checked(instance.utility().value(x, y, z), "utility");
}

std::optional<double> try_invert_price_h(const ProblemInstance& instance, ConstVec x, ConstVec y, double u) {
  if (!instance.agents().bounds().contains(x, kDomainTol))
    throw DomainError("agent type " + format_vec(x) + " lies outside the agent grid bounds");
  if (!instance.product_box().contains(y, kDomainTol))
    throw DomainError("product " + format_vec(y) + " lies outside product_box");
  if (!std::isfinite(u)) throw DomainError("target utility must be finite");
  return invert_impl(instance, x, y, u);
}

double invert_price_h(const ProblemInstance& instance, ConstVec x, ConstVec y, double u) {
  if (auto z = try_invert_price_h(instance, x, y, u)) return *z;
  std::ostringstream os;
  os.precision(17);
  os << "utility " << u << " is not attainable at x=" << format_vec(x) << ", y=" << format_vec(y)
     << " for prices in [" << instance.prices().z_lower << ", " << instance.price_cap() << "]";
  throw UnattainableUtility(os.str());
}

double reservation_utility(const ProblemInstance& instance, ConstVec x) {
  return eval_g(instance, x, instance.outside().y_null, instance.outside().z_null);
}

double eval_profit(const ProblemInstance& instance, ConstVec x, ConstVec y, double z) {
  return checked(instance.profit()(x, y, z), "profit");
}

void utility_gradient_x(const ProblemInstance& instance, ConstVec x, ConstVec y, double z, std::span<double> out) {
  if (out.size() != instance.agent_dim()) throw InvalidInstance("gradient buffer has wrong length");
  instance.utility().gradient_x(x, y, z, out);
  for (double v : out)
    if (!std::isfinite(v)) throw NonFiniteResult("utility gradient returned a non-finite value");
}

}  // namespace screenopt
