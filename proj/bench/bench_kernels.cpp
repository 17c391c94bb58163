// Reference vs parallel weighted copula sums on catalog samples.
#include <benchmark/benchmark.h>

#include <vector>

#include "dtcopula/kernels.hpp"
#include "dtcopula/simulation.hpp"

using namespace dtcopula;

namespace {

struct Setup {
  ObservedSample sample;
  kernels::Kernels ref, par;
  std::vector<double> lifetime, truncation, weights;

  explicit Setup(std::size_t n)
      : sample(make(n)),
        ref(sample, kernels::Backend::Reference),
        par(sample, kernels::Backend::Parallel),
        lifetime(n),
        truncation(n),
        weights(n, 1.0 / n) {
    for (std::size_t i = 0; i < n; ++i) {
      lifetime[i] = (i + 0.5) / n;
      truncation[i] = (n - i - 0.5) / n;
    }
  }

  static ObservedSample make(std::size_t n) {
    Rng rng(7);
    return generate_sample(find_model("Model 2.4", n), rng).sample;
  }

  kernels::PairArgs args() const { return {lifetime, truncation}; }
};

const Copula kFrank(Family::Frank, 5.74);

void window_sums(benchmark::State& state, kernels::Backend backend) {
  const Setup s(state.range(0));
  const auto& k = backend == kernels::Backend::Reference ? s.ref : s.par;
  for (auto _ : state) benchmark::DoNotOptimize(k.window_sums(kFrank, s.args(), Partial::Density, s.weights));
}

void lifetime_sums(benchmark::State& state, kernels::Backend backend) {
  const Setup s(state.range(0));
  const auto& k = backend == kernels::Backend::Reference ? s.ref : s.par;
  for (auto _ : state) benchmark::DoNotOptimize(k.lifetime_sums(kFrank, s.args(), Partial::D21, s.weights));
}

void total_mass(benchmark::State& state, kernels::Backend backend) {
  const Setup s(state.range(0));
  const auto& k = backend == kernels::Backend::Reference ? s.ref : s.par;
  for (auto _ : state) benchmark::DoNotOptimize(k.total_mass(kFrank, s.args(), s.weights, s.weights));
}

}  // namespace

BENCHMARK_CAPTURE(window_sums, reference, kernels::Backend::Reference)->Arg(250)->Arg(1000);
BENCHMARK_CAPTURE(window_sums, parallel, kernels::Backend::Parallel)->Arg(250)->Arg(1000);
BENCHMARK_CAPTURE(lifetime_sums, reference, kernels::Backend::Reference)->Arg(250)->Arg(1000);
BENCHMARK_CAPTURE(lifetime_sums, parallel, kernels::Backend::Parallel)->Arg(250)->Arg(1000);
BENCHMARK_CAPTURE(total_mass, reference, kernels::Backend::Reference)->Arg(250)->Arg(1000);
BENCHMARK_CAPTURE(total_mass, parallel, kernels::Backend::Parallel)->Arg(250)->Arg(1000);

BENCHMARK_MAIN();
