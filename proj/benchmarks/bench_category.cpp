#include <random>

#include <benchmark/benchmark.h>

#include "eqrh/bqtau.hpp"

using namespace eqrh;

namespace {

const Complex kTau(1.0, -1.0);
const double kTheta = 0.6180339887498949;
const numkit::Transversal kT0(kTau, 0.0);

// Diagonal monodromy conjugated by a random invertible matrix.
bq::RepZ2 random_rep(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.5, 2.0), arg(0.0, 2.0 * kPi);
  CMat s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = Complex(d(rng), d(rng));
  s += 3.0 * CMat::Identity(n, n);
  CMat d1 = CMat::Zero(n, n), d2 = CMat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    d1(i, i) = std::polar(u(rng), arg(rng));
    d2(i, i) = std::polar(u(rng), arg(rng));
  }
  const CMat si = s.inverse();
  return bq::make_rep(s * d1 * si, s * d2 * si);
}

// Constant normal form scrambled by the gauge 1 + z N with N strictly upper triangular.
bq::BqObject scrambled(int n, std::uint64_t seed) {
  const bq::NormalForm nf = bq::functor_F(random_rep(n, seed), kT0, kTheta);
  const auto params = nf.params();
  CMat nmat = CMat::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) nmat(i, i + 1) = 0.5;
  laurent::PolyMat p = laurent::PolyMat::identity(n, params);
  p.add_to(1, nmat);
  const auto base = bq::to_object(nf);
  const auto a = laurent::gauge_transform(base.a, p, 24).value;
  const auto b = laurent::twist_equivariance(base.b, p, 24).value;
  return bq::BqObject(a, b, kTheta);
}

}  // namespace

static void BM_Normalize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const bq::BqObject obj = scrambled(n, 21);
  for (auto _ : state) benchmark::DoNotOptimize(bq::normalize(obj, kT0, 16).a0.data());
}
BENCHMARK(BM_Normalize)->DenseRange(2, 6, 2);

static void BM_FunctorF(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const bq::RepZ2 rep = random_rep(n, 22);
  for (auto _ : state) benchmark::DoNotOptimize(bq::functor_F(rep, kT0, kTheta).a0.data());
}
BENCHMARK(BM_FunctorF)->RangeMultiplier(2)->Range(2, 16);

static void BM_HomBasis(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const bq::NormalForm x = bq::functor_F(random_rep(n, 23), kT0, kTheta);
  const bq::NormalForm y = bq::direct_sum(x, x);
  for (auto _ : state) benchmark::DoNotOptimize(bq::hom_basis(x, y).size());
}
BENCHMARK(BM_HomBasis)->RangeMultiplier(2)->Range(1, 8);

static void BM_Tensor(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const bq::NormalForm x = bq::functor_F(random_rep(n, 24), kT0, kTheta);
  const bq::NormalForm y = bq::functor_F(random_rep(n, 25), kT0, kTheta);
  for (auto _ : state) benchmark::DoNotOptimize(bq::tensor(x, y).a0.data());
}
BENCHMARK(BM_Tensor)->RangeMultiplier(2)->Range(1, 4);

static void BM_K0Class(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const bq::NormalForm x = bq::functor_F(random_rep(n, 26), kT0, kTheta);
  for (auto _ : state) benchmark::DoNotOptimize(bq::k0_class(x).rank());
}
BENCHMARK(BM_K0Class)->RangeMultiplier(2)->Range(2, 16);
