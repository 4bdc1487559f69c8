#include <benchmark/benchmark.h>

#include <random>

#include "pfrlab/estimation.hpp"
#include "pfrlab/metrics.hpp"
#include "pfrlab/noise.hpp"
#include "pfrlab/pfr.hpp"

using namespace pfrlab;

namespace {

CliffordCircuit random_circuit(int length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, kCliffordCount - 1);
  CliffordCircuit c;
  for (int k = 0; k < length; ++k) c.gates.push_back(Clifford(pick(rng)));
  return c;
}

void BM_Randomize(benchmark::State& state) {
  const CliffordCircuit circuit = random_circuit(64, 1);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(randomize(circuit, ++seed));
  }
}
BENCHMARK(BM_Randomize);

void BM_ComposedPtm(benchmark::State& state) {
  const CliffordCircuit circuit = random_circuit(64, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(composed_ptm(circuit));
  }
}
BENCHMARK(BM_ComposedPtm);

void BM_SequenceProbability(benchmark::State& state) {
  const CliffordCircuit circuit = random_circuit(64, 3);
  NoiseConfig noise = coherence_preset();
  noise.overrotation_eps = 0.02;
  const SpamConfig spam;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sequence_probability(circuit.gates, noise, spam, 0.01));
  }
}
BENCHMARK(BM_SequenceProbability);

void BM_DiatomicCompile(benchmark::State& state) {
  int idx = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(diatomic_compile(Clifford(idx)));
    idx = (idx + 1) % kCliffordCount;
  }
}
BENCHMARK(BM_DiatomicCompile);

void BM_LoglikGradient(benchmark::State& state) {
  const GstDesign design = standard_design(static_cast<int>(state.range(0)));
  GateSetModel truth = ideal_target_model(design);
  const Eigen::Vector4d depol =
      pauli_probs_from_eigenvalues({1.0, 0.98, 0.98, 0.98});
  for (Ptm& r : truth.gates) r = ptm_of_pauli_channel(depol) * r;
  Dataset ds;
  for (std::size_t s = 0; s < design.sequences.size(); ++s)
    ds.rows.push_back({static_cast<int>(s), 500, 0});
  const std::vector<double> ps = model_probabilities(ds, design, truth);
  for (std::size_t s = 0; s < ds.rows.size(); ++s)
    ds.rows[s].k_ones = std::lround(500 * ps[s]);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dataset_loglik(ds, design, truth));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<long>(ds.rows.size()));
}
BENCHMARK(BM_LoglikGradient)->Arg(16)->Arg(64);

void BM_DiamondDistance(benchmark::State& state) {
  Ptm depol = Ptm::Identity();
  depol(1, 1) = depol(2, 2) = depol(3, 3) = 0.9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(diamond_distance(depol, Ptm::Identity()));
  }
}
BENCHMARK(BM_DiamondDistance);

void BM_InterleavedSampling(benchmark::State& state) {
  const GstDesign design = standard_design(4);
  NoiseConfig noise = coherence_preset();
  noise.overrotation_eps = 0.02;
  noise.drift.amplitude = 0.05;
  noise.drift.period = 5000;
  const SpamConfig spam;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sample_interleaved(design, 10, noise, spam, 7, 5));
  }
  state.SetItemsProcessed(state.iterations() * 20 *
                          static_cast<long>(design.sequences.size()));
}
BENCHMARK(BM_InterleavedSampling);

}  // namespace

BENCHMARK_MAIN();
