#include <random>

#include <benchmark/benchmark.h>

#include "eqrh/numkit.hpp"

using namespace eqrh;

namespace {

CMat random_matrix(int n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, scale);
  CMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(d(rng), d(rng));
  return m;
}

const numkit::Transversal kT0(Complex(1.0, -1.0), 0.0);

}  // namespace

static void BM_LogTransversal(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CMat m = random_matrix(n, 7) + 2.0 * CMat::Identity(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(numkit::log_transversal(m, kT0).log.data());
  state.SetComplexityN(n);
}
BENCHMARK(BM_LogTransversal)->RangeMultiplier(2)->Range(2, 16)->Complexity();

// Jordan block: a single cluster, the worst case for the block recurrence.
static void BM_LogTransversalJordan(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  CMat m = CMat::Identity(n, n) * Complex(0.5, 0.5);
  for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(numkit::log_transversal(m, kT0).log.data());
}
BENCHMARK(BM_LogTransversalJordan)->RangeMultiplier(2)->Range(2, 16);

static void BM_SolveSylvester(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CMat a = random_matrix(n, 11), b = random_matrix(n, 12) + 6.0 * CMat::Identity(n, n), c = random_matrix(n, 13);
  for (auto _ : state) benchmark::DoNotOptimize(numkit::solve_sylvester(a, b, c).data());
  state.SetComplexityN(n);
}
BENCHMARK(BM_SolveSylvester)->RangeMultiplier(2)->Range(2, 32)->Complexity();

static void BM_Spectral(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CMat m = random_matrix(n, 17);
  for (auto _ : state) benchmark::DoNotOptimize(numkit::spectral(m).similarity.data());
}
BENCHMARK(BM_Spectral)->RangeMultiplier(2)->Range(2, 32);
