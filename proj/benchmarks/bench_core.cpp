#include <benchmark/benchmark.h>

#include <random>

#include "radapt/losses.hpp"
#include "radapt/model.hpp"

using radapt::ad::Tape;
using radapt::ad::Var;

// Coordinate-vector construction should stay O(n log n); the per-item time
// must not grow faster than log n as n sweeps 1e3..1e5.
static void BM_BuildAxis(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> dist(0.0, 100.0);
  std::vector<double> psi(static_cast<std::size_t>(n));
  for (double& p : psi) p = dist(rng);
  Tape tape;
  for (auto _ : state) {
    tape.clear();
    auto vars = tape.leaves(psi);
    auto coords = radapt::build_axis(tape, vars, 0.0, 1.0);
    benchmark::DoNotOptimize(coords.back().value());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_BuildAxis)->Arg(1000)->Arg(10000)->Arg(100000);

static void BM_TapeRecordBackward(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Tape tape;
  for (auto _ : state) {
    tape.clear();
    Var x = tape.leaf(0.7);
    Var acc = tape.constant(0.0);
    for (int i = 0; i < n; ++i) acc += radapt::ad::sigmoid(x * (i * 1e-3) + 0.1);
    auto g = tape.backward(acc);
    benchmark::DoNotOptimize(g[x]);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_TapeRecordBackward)->Arg(1000)->Arg(100000);

// One full loss evaluation plus gradient for the 2D smooth problem on a
// 16x16 mesh, the shape of one training epoch.
static void BM_RitzEpoch2D(benchmark::State& state) {
  radapt::ProblemSpec spec = radapt::make_experiment(5);
  radapt::Network net = radapt::Network::dense(2, 5, 10);
  std::vector<double> params = net.init_params(1);
  const std::size_t theta_count = params.size();
  auto psi = radapt::init_uniform(15);
  params.insert(params.end(), psi.begin(), psi.end());
  params.insert(params.end(), psi.begin(), psi.end());
  const std::size_t psi_n = psi.size();

  Tape tape;
  for (auto _ : state) {
    tape.clear();
    auto vars = tape.leaves(params);
    std::span<const Var> all(vars);
    auto ax = radapt::build_axis(tape, all.subspan(theta_count, psi_n), 0.0, 1.0);
    auto ay = radapt::build_axis(tape, all.subspan(theta_count + psi_n, psi_n), 0.0, 1.0);
    auto mesh = radapt::build_mesh({ax, ay});
    auto raw = radapt::nn_at_nodes(net, all.subspan(0, theta_count), mesh);
    auto nodal = radapt::apply_lift(mesh, spec.phi_d, nullptr, raw);
    Var loss = radapt::loss_ritz(spec, mesh, nodal, 5);
    auto g = tape.backward(loss);
    benchmark::DoNotOptimize(g[vars[0]]);
  }
}
BENCHMARK(BM_RitzEpoch2D)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
