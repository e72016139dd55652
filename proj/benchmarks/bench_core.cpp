#include <benchmark/benchmark.h>

#include <cascade/fock.hpp>
#include <cascade/schmidt.hpp>
#include <cascade/spectral.hpp>

using namespace cascade;

static void BM_JointAmplitude(benchmark::State& state) {
  EnsembleParams p{0.25, 5.0, 1.0};
  auto g = default_grid(p, 600.0, state.range(0));
  for (auto _ : state) {
    auto amp = joint_amplitude(p, g, g);
    benchmark::DoNotOptimize(amp.values.data());
  }
  state.SetComplexityN(g.size());
}
BENCHMARK(BM_JointAmplitude)->Arg(300)->Arg(600)->Complexity(benchmark::oNSquared);

static void BM_KernelBuild(benchmark::State& state) {
  EnsembleParams p{0.25, 5.0, 1.0};
  auto g = default_grid(p, 600.0, state.range(0));
  auto amp = joint_amplitude(p, g, g);
  for (auto _ : state) {
    auto kernels = build_kernels(amp);
    benchmark::DoNotOptimize(kernels.first.entries.data());
  }
}
BENCHMARK(BM_KernelBuild)->Arg(300)->Arg(600);

static void BM_SchmidtDecompose(benchmark::State& state) {
  EnsembleParams p{0.25, 5.0, 1.0};
  auto g = default_grid(p, 600.0, state.range(0));
  auto amp = joint_amplitude(p, g, g);
  auto kernels = build_kernels(amp);
  for (auto _ : state) {
    auto d = decompose(kernels.first, kernels.second, amp);
    benchmark::DoNotOptimize(d.eigenvalues.data());
  }
}
BENCHMARK(BM_SchmidtDecompose)->Arg(300)->Arg(600)->Unit(benchmark::kMillisecond);

static void BM_GeometricFactor(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(geometric_factor({100.0, 20.0, 1000}));
  }
}
BENCHMARK(BM_GeometricFactor)->Unit(benchmark::kMillisecond);

static void BM_SwapOracle(benchmark::State& state) {
  fock::NetworkParams np;
  np.eta1 = 0.08;
  np.eta2 = 0.1;
  np.eta_t = 0.8;
  np.eta_eff = 0.7;
  np.lams = state.range(0) == 1 ? std::vector<double>{1.0} : std::vector<double>{0.8, 0.2};
  for (auto _ : state) {
    auto m = fock::run_network(fock::Network::swap, np);
    benchmark::DoNotOptimize(m.fidelity);
  }
}
BENCHMARK(BM_SwapOracle)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_TeleportOracle(benchmark::State& state) {
  fock::NetworkParams np;
  np.eta1 = 0.08;
  np.eta2 = 0.1;
  np.lams = {0.8, 0.2};
  np.d0 = 0.6;
  np.d1 = 0.8;
  for (auto _ : state) {
    auto m = fock::run_network(fock::Network::teleport, np);
    benchmark::DoNotOptimize(m.qt_success);
  }
}
BENCHMARK(BM_TeleportOracle)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
