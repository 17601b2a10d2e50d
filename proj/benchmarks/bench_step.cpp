#include <benchmark/benchmark.h>

#include "depsgld/data.hpp"
#include "depsgld/metrics.hpp"
#include "depsgld/samplers.hpp"

using namespace depsgld;

static void BM_DepsgldRoundBlr(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DataSet data = generate_blr_data(500 * n, 1);
  const auto p = linreg_potential(data, n, 0.25);
  const auto k = ConvexSet::l2_ball(2, 1.0);
  const auto w = mixing_matrix(build_graph(TopologyKind::kComplete, n));
  SamplerConfig cfg;
  cfg.eta = 1e-5;
  cfg.gamma = 5e-5;
  cfg.batch = 100;
  auto s = make_network_state(n, 2, cfg, 0, k);
  for (auto _ : state) {
    advance_depsgld(s, w, *p, k, cfg);
    benchmark::DoNotOptimize(s.agents.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_DepsgldRoundBlr)->Arg(5)->Arg(20)->Arg(30);

static void BM_DepsgldRoundQuartic(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = quartic_1d(n);
  const auto k = ConvexSet::box(1, -1.0, 1.0);
  const auto w = mixing_matrix(build_graph(TopologyKind::kRing, n));
  SamplerConfig cfg;
  auto s = make_network_state(n, 1, cfg, 0, k);
  for (auto _ : state) {
    advance_depsgld(s, w, *p, k, cfg);
    benchmark::DoNotOptimize(s.agents.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_DepsgldRoundQuartic)->Arg(30);

static void BM_ProjectL1(benchmark::State& state) {
  const auto d = state.range(0);
  RngStream rng(1);
  Vector x(d), out(d);
  rng.fill_normal(x);
  for (auto _ : state) {
    project_l1_ball(x, 1.0, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_ProjectL1)->Arg(30)->Arg(1000);

static void BM_Wasserstein1d(benchmark::State& state) {
  const auto q = true_quantile_1d([](double x) { return 0.5 * x * x + x * x * x * x / 8.0 - x; }, -1.0, 1.0);
  RngStream rng(2);
  std::vector<double> xs(static_cast<std::size_t>(state.range(0)));
  for (auto& v : xs) v = 2.0 * rng.uniform() - 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(wasserstein2_1d(xs, q));
}
BENCHMARK(BM_Wasserstein1d)->Arg(100)->Arg(10000);

static void BM_MixingMatrix(benchmark::State& state) {
  const auto g = build_graph(TopologyKind::kRing, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mixing_matrix(g).rho);
}
BENCHMARK(BM_MixingMatrix)->Arg(30)->Arg(64);
BENCHMARK_MAIN();
