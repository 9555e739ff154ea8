#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "screenopt/gconvex.hpp"
#include "screenopt/oracle.hpp"
#include "screenopt/solver.hpp"

using namespace screenopt;
using namespace screenopt::testing;

namespace {

void BM_Envelope(benchmark::State& state) {
  const auto inst = family_instance(Family::quasilinear, static_cast<std::size_t>(state.range(0)));
  Rng rng(1);
  const Menu m = random_menu(inst, rng, 4);
  for (auto _ : state) benchmark::DoNotOptimize(g_envelope(inst, m));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(inst.agent_count()));
}
BENCHMARK(BM_Envelope)->Arg(5)->Arg(20)->Arg(50);

void BM_AggregateProfit(benchmark::State& state) {
  const auto inst = family_instance(Family::separable_price, static_cast<std::size_t>(state.range(0)));
  Rng rng(2);
  const Menu m = random_menu(inst, rng, 4);
  for (auto _ : state) benchmark::DoNotOptimize(aggregate_profit(inst, m).profit);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(inst.agent_count()));
}
BENCHMARK(BM_AggregateProfit)->Arg(5)->Arg(20)->Arg(50);

void BM_Inversion(benchmark::State& state) {
  const auto f = static_cast<Family>(state.range(0));
  const auto inst = family_instance(f);
  const Vec x{0.5, 0.6}, y{1.0, 1.5};
  const double u = eval_g(inst, x, y, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(invert_price_h(inst, x, y, u));
  state.SetLabel(family_name(f));
}
BENCHMARK(BM_Inversion)->DenseRange(0, 3);

void BM_Solve(benchmark::State& state) {
  const auto inst = family_instance(Family::quasilinear, 4);
  SolveConfig cfg;
  cfg.seed = 7;
  cfg.menu_size = 2;
  cfg.restarts = 2;
  for (auto _ : state) benchmark::DoNotOptimize(solve(inst, cfg).best_profit);
}
BENCHMARK(BM_Solve)->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State& state) {
  const auto inst = two_type();
  const OracleConfig grid{{{0.0, 2.0, 9}}, {0.0, 2.0, 21}, 2};
  for (auto _ : state) benchmark::DoNotOptimize(solve_bruteforce(inst, grid).best_profit);
}
BENCHMARK(BM_Oracle)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
