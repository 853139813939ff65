#include <benchmark/benchmark.h>

#include <random>

#include "tdsnn/network.hpp"
#include "tdsnn/neuron.hpp"
#include "tdsnn/rls.hpp"
#include "tdsnn/synapse.hpp"

using namespace tdsnn;

static void BM_NeuronStep(benchmark::State& state) {
  const NeuronParams p;
  NeuronState s;
  bool exc = false;
  for (auto _ : state) {
    s = neuron_step(s, p, exc, false, 10e-6).state;
    exc = !exc;
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_NeuronStep);

static void BM_SynapseStep(benchmark::State& state) {
  const SynapseParams p;
  SynapseState s;
  std::int64_t k = 0;
  for (auto _ : state) {
    s = synapse_step(s, p, ++k % 500 == 0, 10e-6).state;
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_SynapseStep);

// One dt of a random network; items are neuron updates.
static void BM_NetworkStep(benchmark::State& state) {
  NetworkConfig c;
  c.n_neurons = static_cast<std::size_t>(state.range(0));
  RandomTopology t;
  t.p = 0.1;
  c.connections = t;
  c.rng_seed = 42;
  Network net(c);
  for (auto _ : state) net.step();
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NetworkStep)->Arg(100)->Arg(1000);

static void BM_RlsUpdate(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  RlsState s = RlsState::init(n, 1.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd r(n);
  double t = 0.0;
  for (auto _ : state) {
    for (Eigen::Index i = 0; i < n; ++i) r(i) = u(rng);
    rls_update(s, r, s.w.dot(r), std::sin(t += 1e-3));
  }
}
BENCHMARK(BM_RlsUpdate)->Arg(100)->Arg(400);
BENCHMARK_MAIN();
