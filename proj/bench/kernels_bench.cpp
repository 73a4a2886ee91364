// Serial reference vs OpenMP kernels on the transforms used by flows and the
// Rayleigh solver. Sizes are node counts n; the basis is n x n.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "gnsphere/kernels.hpp"
#include "gnsphere/quadrature.hpp"

namespace {

using namespace gnsphere;

struct Fixture {
  RulePtr rule;
  std::vector<double> coeffs;
  std::vector<double> values;
  std::vector<double> out;

  explicit Fixture(int n) : rule(make_rule(3, n)), coeffs(n), values(n), out(n) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    for (int k = 0; k < n; ++k) coeffs[k] = nd(rng) / (1.0 + k);
    kernels::serial::synthesize(rule->basis(), n, n, coeffs, values);
  }
};

template <auto Kernel>
void bm_synthesize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Fixture f(n);
  for (auto _ : state) {
    Kernel(f.rule->basis(), n, n, f.coeffs, f.out);
    benchmark::DoNotOptimize(f.out.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

template <auto Kernel>
void bm_analyze(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Fixture f(n);
  for (auto _ : state) {
    Kernel(f.rule->basis(), n, n, f.rule->weights(), f.values, f.out);
    benchmark::DoNotOptimize(f.out.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

template <auto Kernel>
void bm_abs_pow(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> in(n), out(n);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ud(-2.0, 2.0);
  for (auto& x : in) x = ud(rng);
  for (auto _ : state) {
    Kernel(in, 2.7, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

}  // namespace

BENCHMARK(bm_synthesize<kernels::serial::synthesize>)->Name("synthesize/serial")->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(bm_synthesize<kernels::parallel::synthesize>)->Name("synthesize/parallel")->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(bm_analyze<kernels::serial::analyze>)->Name("analyze/serial")->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(bm_analyze<kernels::parallel::analyze>)->Name("analyze/parallel")->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(bm_abs_pow<kernels::serial::abs_pow>)->Name("abs_pow/serial")->RangeMultiplier(8)->Range(1 << 10, 1 << 20);
BENCHMARK(bm_abs_pow<kernels::parallel::abs_pow>)->Name("abs_pow/parallel")->RangeMultiplier(8)->Range(1 << 10, 1 << 20);

BENCHMARK_MAIN();
