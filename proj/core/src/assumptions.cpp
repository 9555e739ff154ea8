#include "screenopt/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "screenopt/rng.hpp"

namespace screenopt {

const char* to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::not_checked: return "not-checked";
  }
  return "unknown";
}

bool AssumptionReport::all_pass() const {
  return std::none_of(checks.begin(), checks.end(), [](const auto& c) { return c.status == CheckStatus::fail; });
}

std::optional<double> AssumptionReport::coercivity_radius(double s) const {
  std::optional<double> radius;
  for (std::size_t k = coercivity.size(); k-- > 0;) {
    if (coercivity[k].min_gradient_l1 < s) break;
    radius = coercivity[k].radius;
  }
  return radius;
}

namespace {

constexpr double kNonFinite = std::numeric_limits<double>::max();

class Sampler {
 public:
  Sampler(const ProblemInstance& instance, std::uint64_t seed) : instance_(instance), rng_(seed) {}

  Vec x() { return in_box(instance_.agents().bounds()); }
  Vec y() { return in_box(instance_.product_box()); }
  double z() { return rng_.uniform(instance_.prices().z_lower, instance_.price_cap()); }
  Rng& rng() { return rng_; }

 private:
  Vec in_box(const Box& box) {
    Vec p(box.dim());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = rng_.uniform(box.lower[i], box.upper[i]);
    return p;
  }

  const ProblemInstance& instance_;
  Rng rng_;
};

/// Keeps the largest violation seen; earlier samples win ties.
class WorstViolation {
 public:
  void offer(double violation, Witness w) {
    if (violation > kAssumptionTol && (!worst_ || violation > worst_->violation)) {
      w.violation = violation;
      worst_ = std::move(w);
    }
  }
  bool found() const { return worst_.has_value(); }

  void finish(AssumptionCheck& check, const std::string& pass_detail, const std::string& fail_detail) {
    if (worst_) {
      check.status = CheckStatus::fail;
      check.detail = fail_detail;
      check.witness = std::move(worst_);
    } else {
      check.status = CheckStatus::pass;
      check.detail = pass_detail;
    }
  }

 private:
  std::optional<Witness> worst_;
};

double power_norm(ConstVec v, double p) {
  double s = 0.0;
  for (double a : v) s += std::pow(std::abs(a), p);
  return s;
}

double norm_l1(ConstVec v) {
  double s = 0.0;
  for (double a : v) s += std::abs(a);
  return s;
}

double norm_l2(ConstVec v) {
  double s = 0.0;
  for (double a : v) s += a * a;
  return std::sqrt(s);
}

bool degenerate(const Box& box) {
  for (std::size_t i = 0; i < box.dim(); ++i)
    if (box.upper[i] > box.lower[i]) return false;
  return true;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

/// Least squares for A c ~= b with a tiny ridge; rows are feature vectors.
Vec least_squares(const std::vector<Vec>& rows, const Vec& rhs) {
  const std::size_t k = rows.empty() ? 0 : rows.front().size();
  std::vector<Vec> a(k, Vec(k + 1, 0.0));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) a[i][j] += rows[r][i] * rows[r][j];
      a[i][k] += rows[r][i] * rhs[r];
    }
  for (std::size_t i = 0; i < k; ++i) a[i][i] += 1e-12 * (1.0 + a[i][i]);
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    if (a[col][col] == 0.0) continue;
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t j = col; j <= k; ++j) a[r][j] -= f * a[col][j];
    }
  }
  Vec sol(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) sol[i] = a[i][i] != 0.0 ? a[i][k] / a[i][i] : 0.0;
  return sol;
}

// -- A1: finiteness and the price-cap bound G(x, y, cap) <= u_null(x) ------
void check_a1(const ProblemInstance& inst, std::size_t n, std::uint64_t seed, AssumptionCheck& out) {
  Sampler s(inst, seed);
  WorstViolation worst;
  const double cap = inst.price_cap();
  for (std::size_t k = 0; k < n; ++k) {
    Vec x = s.x(), y = s.y();
    const double z = s.z();
    const double g = inst.utility().value(x, y, z);
    if (!std::isfinite(g)) {
      worst.offer(kNonFinite, Witness{x, {}, y, z, {}, 0.0});
      continue;
    }
    const double at_cap = inst.utility().value(x, y, cap);
    const double reservation = inst.utility().value(x, inst.outside().y_null, inst.outside().z_null);
    worst.offer(at_cap - reservation, Witness{x, {}, y, cap, {}, 0.0});
  }
  worst.finish(out, "G finite on samples and G(x,y,cap) <= u_null(x)",
               "G non-finite or priced-out products beat the outside option");
}

// -- A2: strictly decreasing in z --------------------------------------------
void check_a2(const ProblemInstance& inst, std::size_t n, std::uint64_t seed, AssumptionCheck& out) {
  Sampler s(inst, seed);
  WorstViolation worst;
  for (std::size_t k = 0; k < n; ++k) {
    Vec x = s.x(), y = s.y();
    double z1 = s.z(), z2 = s.z();
    if (z1 == z2) continue;
    if (z1 > z2) std::swap(z1, z2);
    const double g1 = inst.utility().value(x, y, z1);
    const double g2 = inst.utility().value(x, y, z2);
    const double violation = std::isfinite(g1) && std::isfinite(g2) ? g2 - g1 : kNonFinite;
    worst.offer(violation, Witness{x, {}, y, z1, z2, 0.0});
  }
  worst.finish(out, "no sampled pair z < z' with G(x,y,z') >= G(x,y,z)", "G increases with price");
}

// -- A3: coordinate-monotone in x ---------------------------------------------
void check_a3(const ProblemInstance& inst, std::size_t n, std::uint64_t seed, AssumptionCheck& out) {
  const Box& xb = inst.agents().bounds();
  if (degenerate(xb)) {
    out.status = CheckStatus::not_checked;
    out.detail = "agent grid spans no interval";
    return;
  }
  Sampler s(inst, seed);
  WorstViolation worst;
  const std::size_t m = inst.agent_dim();
  for (std::size_t k = 0; k < n; ++k) {
    Vec x = s.x(), y = s.y();
    const double z = s.z();
    const std::size_t i = k % m;
    const double room = xb.upper[i] - x[i];
    if (!(room > 0.0)) continue;
    Vec hi = x;
    hi[i] = x[i] + s.rng().uniform(0.0, room);
    if (hi[i] == x[i]) continue;
    const double g_lo = inst.utility().value(x, y, z);
    const double g_hi = inst.utility().value(hi, y, z);
    const double violation = std::isfinite(g_lo) && std::isfinite(g_hi) ? g_lo - g_hi : kNonFinite;
    worst.offer(violation, Witness{x, hi, y, z, {}, 0.0});
  }
  worst.finish(out, "no sampled coordinate increase of x lowered G", "G decreases along an agent coordinate");
}

// -- A4: H(x,y,u) <= -a1 ||y||_a^a - a2 u + b ---------------------------------
void check_a4(const ProblemInstance& inst, std::size_t n, std::uint64_t seed, AssumptionCheck& out,
              AssumptionReport& report) {
  Sampler s(inst, seed);
  const auto& declared = inst.declared().price_decay;
  const double alpha = declared ? declared->alpha : 2.0;
  struct Sample {
    Vec x, y;
    double u, h;
  };
  std::vector<Sample> samples;
  samples.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    Vec x = s.x(), y = s.y();
    const double g_lo = inst.utility().value(x, y, inst.prices().z_lower);
    const double g_hi = inst.utility().value(x, y, inst.price_cap());
    const double t = s.rng().uniform();
    if (!(g_lo > g_hi)) continue;
    const double u = g_hi + t * (g_lo - g_hi);
    try {
      if (auto h = try_invert_price_h(inst, x, y, u)) samples.push_back({std::move(x), std::move(y), u, *h});
    } catch (const Error&) {
    }
  }
  if (samples.empty()) {
    out.status = CheckStatus::not_checked;
    out.detail = "H could not be evaluated on any sample";
    return;
  }

  SuperlinearBound bound;
  if (declared) {
    bound = *declared;
    report.price_decay_declared = true;
  } else {
    std::vector<Vec> rows;
    Vec rhs;
    for (const auto& sm : samples) {
      rows.push_back({-power_norm(sm.y, alpha), -sm.u, 1.0});
      rhs.push_back(sm.h);
    }
    const Vec coef = least_squares(rows, rhs);
    bound.alpha = alpha;
    bound.a1 = std::max(coef[0], 1e-6);
    bound.a2 = std::max(coef[1], 1e-6);
    bound.b = -std::numeric_limits<double>::infinity();
    for (const auto& sm : samples)
      bound.b = std::max(bound.b, sm.h + bound.a1 * power_norm(sm.y, alpha) + bound.a2 * sm.u);
  }
  report.price_decay = bound;

  WorstViolation worst;
  for (const auto& sm : samples) {
    const double rhs = -bound.a1 * power_norm(sm.y, bound.alpha) - bound.a2 * sm.u + bound.b;
    worst.offer(sm.h - rhs, Witness{sm.x, {}, sm.y, sm.h, {}, 0.0});
  }
  const std::string how = declared ? "declared" : "fitted";
  worst.finish(out, how + " constants bound H on all samples", "H exceeds the " + how + " super-linear bound");
}

// -- A5: Lipschitz D_xG in x --------------------------------------------------
void check_a5(const ProblemInstance& inst, std::size_t n, std::uint64_t seed, AssumptionCheck& out,
              AssumptionReport& report) {
  if (degenerate(inst.agents().bounds())) {
    out.status = CheckStatus::not_checked;
    out.detail = "agent grid spans no interval";
    return;
  }
  Sampler s(inst, seed);
  const std::size_t m = inst.agent_dim();
  Vec g1(m), g2(m), diff(m), dx(m);
  double k_max = 0.0;
  Witness arg;
  for (std::size_t k = 0; k < n; ++k) {
    Vec x1 = s.x(), x2 = s.x(), y = s.y();
    const double z = s.z();
    inst.utility().gradient_x(x1, y, z, g1);
    inst.utility().gradient_x(x2, y, z, g2);
    for (std::size_t i = 0; i < m; ++i) {
      diff[i] = g1[i] - g2[i];
      dx[i] = x1[i] - x2[i];
    }
    const double step = norm_l2(dx);
    if (!(step > 1e-8)) continue;
    const double ratio = norm_l2(diff) / step;
    if (!std::isfinite(ratio)) {
      k_max = kNonFinite;
      arg = Witness{x1, x2, y, z, {}, kNonFinite};
      continue;
    }
    if (ratio > k_max) {
      k_max = ratio;
      arg = Witness{x1, x2, y, z, {}, 0.0};
    }
  }
  report.lipschitz_k = k_max;
  if (const auto& declared = inst.declared().lipschitz_k) {
    if (k_max - *declared > kAssumptionTol) {
      out.status = CheckStatus::fail;
      out.detail = "difference quotient " + fmt(k_max) + " exceeds declared k=" + fmt(*declared);
      arg.violation = k_max - *declared;
      out.witness = arg;
      return;
    }
  }
  if (k_max == kNonFinite) {
    out.status = CheckStatus::fail;
    out.detail = "non-finite gradient difference quotient";
    arg.violation = kNonFinite;
    out.witness = arg;
    return;
  }
  out.status = CheckStatus::pass;
  out.detail = "estimated k=" + fmt(k_max);
}

// -- A6: ||D_xG||_1 <= c ||y||_b^b + d ----------------------------------------
void check_a6(const ProblemInstance& inst, std::size_t n, std::uint64_t seed, AssumptionCheck& out,
              AssumptionReport& report) {
  Sampler s(inst, seed);
  const auto& declared = inst.declared().gradient_growth;
  const double beta = declared ? declared->beta : 1.0;
  struct Sample {
    Vec x, y;
    double z, g1;
  };
  std::vector<Sample> samples;
  Vec grad(inst.agent_dim());
  for (std::size_t k = 0; k < n; ++k) {
    Vec x = s.x(), y = s.y();
    const double z = s.z();
    inst.utility().gradient_x(x, y, z, grad);
    samples.push_back({std::move(x), std::move(y), z, norm_l1(grad)});
  }

  SublinearBound bound;
  if (declared) {
    bound = *declared;
    report.gradient_growth_declared = true;
  } else {
    std::vector<Vec> rows;
    Vec rhs;
    for (const auto& sm : samples) {
      rows.push_back({power_norm(sm.y, beta), 1.0});
      rhs.push_back(sm.g1);
    }
    const Vec coef = least_squares(rows, rhs);
    bound.beta = beta;
    bound.c = std::max(coef[0], 1e-6);
    bound.d = -std::numeric_limits<double>::infinity();
    for (const auto& sm : samples) bound.d = std::max(bound.d, sm.g1 - bound.c * power_norm(sm.y, beta));
  }
  report.gradient_growth = bound;

  WorstViolation worst;
  for (const auto& sm : samples) {
    const double violation =
        std::isfinite(sm.g1) ? sm.g1 - (bound.c * power_norm(sm.y, bound.beta) + bound.d) : kNonFinite;
    worst.offer(violation, Witness{sm.x, {}, sm.y, sm.z, {}, 0.0});
  }
  const double alpha = report.price_decay.alpha;
  const std::string how = declared ? "declared" : "fitted";
  std::string pass_detail = how + " constants bound ||D_xG||_1 on all samples";
  if (bound.beta > alpha) pass_detail += "; note beta exceeds alpha";
  worst.finish(out, pass_detail, "||D_xG||_1 exceeds the " + how + " sub-linear bound");
}

// -- A7: coercivity table along rays from the origin -------------------------
void check_a7(const ProblemInstance& inst, std::size_t n, std::uint64_t seed, AssumptionCheck& out,
              AssumptionReport& report) {
  const Box& box = inst.product_box();
  const std::size_t dim = box.dim();

  std::vector<Vec> directions;
  for (std::size_t j = 0; j < dim; ++j) {
    if (box.upper[j] > 0.0) {
      Vec d(dim, 0.0);
      d[j] = 1.0;
      directions.push_back(std::move(d));
    }
    if (box.lower[j] < 0.0) {
      Vec d(dim, 0.0);
      d[j] = -1.0;
      directions.push_back(std::move(d));
    }
  }
  if (dim > 1) {
    const std::size_t patterns = dim <= 3 ? (std::size_t{1} << dim) : 2;
    for (std::size_t p = 0; p < patterns; ++p) {
      Vec d(dim);
      for (std::size_t j = 0; j < dim; ++j) {
        const bool negative = dim <= 3 ? ((p >> j) & 1U) : p == 1;
        d[j] = (negative ? -1.0 : 1.0) / std::sqrt(static_cast<double>(dim));
      }
      directions.push_back(std::move(d));
    }
  }

  // Feasible radius interval of r * d inside the box, per direction.
  std::vector<std::pair<double, double>> reach;
  double r_max = 0.0;
  for (const auto& d : directions) {
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < dim; ++j) {
      if (d[j] > 0.0) {
        lo = std::max(lo, box.lower[j] / d[j]);
        hi = std::min(hi, box.upper[j] / d[j]);
      } else if (d[j] < 0.0) {
        lo = std::max(lo, box.upper[j] / d[j]);
        hi = std::min(hi, box.lower[j] / d[j]);
      } else if (box.lower[j] > 0.0 || box.upper[j] < 0.0) {
        hi = -1.0;
      }
    }
    reach.emplace_back(lo, hi);
    if (hi >= lo) r_max = std::max(r_max, hi);
  }

  // (x, z) probes: agent-box corners at both price ends, then random draws.
  Sampler s(inst, seed);
  std::vector<std::pair<Vec, double>> probes;
  const Box& xb = inst.agents().bounds();
  const std::size_t m = xb.dim();
  if (m <= 4) {
    for (std::size_t c = 0; c < (std::size_t{1} << m); ++c) {
      Vec x(m);
      for (std::size_t i = 0; i < m; ++i) x[i] = ((c >> i) & 1U) ? xb.upper[i] : xb.lower[i];
      probes.emplace_back(x, inst.prices().z_lower);
      probes.emplace_back(x, inst.price_cap());
    }
  }
  const std::size_t random_probes = std::max<std::size_t>(8, n / 32);
  for (std::size_t k = 0; k < random_probes; ++k) {
    Vec x = s.x();
    probes.emplace_back(std::move(x), s.z());
  }

  constexpr std::size_t kLevels = 16;
  Vec grad(m);
  std::vector<Witness> argmins;
  report.coercivity.clear();
  for (std::size_t level = 0; level <= kLevels; ++level) {
    const double r = r_max * static_cast<double>(level) / static_cast<double>(kLevels);
    double best = std::numeric_limits<double>::infinity();
    Witness arg;
    bool any = false;
    for (std::size_t di = 0; di < directions.size(); ++di) {
      const auto [lo, hi] = reach[di];
      if (!(r >= lo - 1e-12 && r <= hi + 1e-12)) continue;
      Vec y(dim);
      for (std::size_t j = 0; j < dim; ++j) y[j] = std::clamp(r * directions[di][j], box.lower[j], box.upper[j]);
      for (const auto& [x, z] : probes) {
        inst.utility().gradient_x(x, y, z, grad);
        const double g1 = norm_l1(grad);
        any = true;
        if (g1 < best) {
          best = g1;
          arg = Witness{x, {}, y, z, {}, 0.0};
        }
      }
    }
    if (!any) continue;
    report.coercivity.push_back({r, best});
    argmins.push_back(std::move(arg));
  }

  if (report.coercivity.size() < 2) {
    out.status = CheckStatus::not_checked;
    out.detail = "product_box admits fewer than two probe radii";
    return;
  }
  WorstViolation worst;
  for (std::size_t k = 1; k < report.coercivity.size(); ++k)
    worst.offer(report.coercivity[k - 1].min_gradient_l1 - report.coercivity[k].min_gradient_l1, argmins[k]);
  if (!worst.found()) {
    // The table must also grow by a non-negligible amount over the probed range.
    constexpr double kMinGrowth = 1e-6;
    const double growth = report.coercivity.back().min_gradient_l1 - report.coercivity.front().min_gradient_l1;
    worst.offer(kMinGrowth - growth, argmins.back());
  }
  worst.finish(out, "min sum|D_x G| grows with ||y|| over the probed radii",
               "min sum|D_x G| fails to grow with ||y||");
}

// -- A8: reservation utility integrable --------------------------------------
void check_a8(const ProblemInstance& inst, AssumptionCheck& out) {
  double total = 0.0;
  for (std::size_t i = 0; i < inst.agent_count(); ++i)
    total += inst.agents().weight(i) * std::abs(inst.reservation()[i]);
  if (std::isfinite(total)) {
    out.status = CheckStatus::pass;
    out.detail = "sum mu_i |u_null(x_i)| = " + fmt(total);
  } else {
    out.status = CheckStatus::fail;
    out.detail = "reservation utility is not integrable";
    out.witness = Witness{{}, {}, inst.outside().y_null, inst.outside().z_null, {}, kNonFinite};
  }
}

// -- A9: profit continuous with a uniform lower bound -------------------------
void check_a9(const ProblemInstance& inst, std::size_t n, std::uint64_t seed, AssumptionCheck& out) {
  Sampler s(inst, seed);
  WorstViolation worst;
  for (std::size_t k = 0; k < n; ++k) {
    Vec x = s.x(), y = s.y();
    const double z = s.z();
    const double p = inst.profit()(x, y, z);
    const double violation = std::isfinite(p) ? inst.profit().lower_bound() - p : kNonFinite;
    worst.offer(violation, Witness{x, {}, y, z, {}, 0.0});
  }
  worst.finish(out, "pi >= declared lower bound " + fmt(inst.profit().lower_bound()) + " on samples",
               "pi falls below its declared lower bound");
}

// -- A10: pi + G <= C0 ---------------------------------------------------------
void check_a10(const ProblemInstance& inst, std::size_t n, std::uint64_t seed, AssumptionCheck& out,
               AssumptionReport& report) {
  Sampler s(inst, seed);
  struct Sample {
    Vec x, y;
    double z, total;
  };
  std::vector<Sample> samples;
  double c0 = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    Vec x = s.x(), y = s.y();
    const double z = s.z();
    double total = inst.profit()(x, y, z) + inst.utility().value(x, y, z);
    if (!std::isfinite(total)) total = kNonFinite;
    c0 = std::max(c0, total);
    samples.push_back({std::move(x), std::move(y), z, total});
  }
  const auto& declared = inst.profit().joint_bound();
  report.joint_bound_declared = declared.has_value();
  report.joint_bound_c0 = declared ? *declared : c0;
  WorstViolation worst;
  if (declared) {
    for (const auto& sm : samples) worst.offer(sm.total - *declared, Witness{sm.x, {}, sm.y, sm.z, {}, 0.0});
  } else {
    for (const auto& sm : samples)
      if (sm.total == kNonFinite) worst.offer(kNonFinite, Witness{sm.x, {}, sm.y, sm.z, {}, 0.0});
  }
  worst.finish(out, declared ? "pi + G <= declared C0" : "probed C0 = " + fmt(c0), "pi + G exceeds C0");
}

void guarded(AssumptionCheck& out, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    out.status = CheckStatus::fail;
    out.detail = std::string("evaluation error: ") + e.what();
    out.witness = Witness{{}, {}, {}, {}, {}, kNonFinite};
  }
}

}  // namespace

AssumptionReport validate_assumptions(const ProblemInstance& instance, std::size_t sample_count, std::uint64_t seed,
                                      Executor& executor) {
  if (sample_count < 100) throw std::invalid_argument("validate_assumptions needs sample_count >= 100");
  AssumptionReport report;
  report.sample_count = sample_count;
  report.seed = seed;
  for (int id = 1; id <= 10; ++id) report.checks[static_cast<std::size_t>(id - 1)].id = id;

  const std::size_t n = sample_count;
  auto& c = report.checks;
  auto stream = [seed](std::uint64_t id) { return Rng::derive(seed, id); };
  // A6 reads the A4 exponent, so A4 runs first within its task.
  executor.for_each_index(9, [&](std::size_t task) {
    switch (task) {
      case 0: guarded(c[0], [&] { check_a1(instance, n, stream(1), c[0]); }); break;
      case 1: guarded(c[1], [&] { check_a2(instance, n, stream(2), c[1]); }); break;
      case 2: guarded(c[2], [&] { check_a3(instance, n, stream(3), c[2]); }); break;
      case 3:
        guarded(c[3], [&] { check_a4(instance, n, stream(4), c[3], report); });
        guarded(c[5], [&] { check_a6(instance, n, stream(6), c[5], report); });
        break;
      case 4: guarded(c[4], [&] { check_a5(instance, n, stream(5), c[4], report); }); break;
      case 5: guarded(c[6], [&] { check_a7(instance, n, stream(7), c[6], report); }); break;
      case 6: guarded(c[7], [&] { check_a8(instance, c[7]); }); break;
      case 7: guarded(c[8], [&] { check_a9(instance, n, stream(9), c[8]); }); break;
      case 8: guarded(c[9], [&] { check_a10(instance, n, stream(10), c[9], report); }); break;
      default: break;
    }
  });
  return report;
}

AssumptionCheck check_price_monotonicity(const ProblemInstance& instance, std::size_t sample_count,
                                         std::uint64_t seed) {
  AssumptionCheck check;
  check.id = 2;
  guarded(check, [&] { check_a2(instance, sample_count, Rng::derive(seed, 2), check); });
  return check;
}

AssumptionCheck check_type_monotonicity(const ProblemInstance& instance, std::size_t sample_count,
                                        std::uint64_t seed) {
  AssumptionCheck check;
  check.id = 3;
  guarded(check, [&] { check_a3(instance, sample_count, Rng::derive(seed, 3), check); });
  return check;
}

}  // namespace screenopt
