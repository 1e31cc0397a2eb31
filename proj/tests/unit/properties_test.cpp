// Seeded property checks over random objects.

#include <cmath>

#include <gtest/gtest.h>

#include "eqrh/atheta.hpp"
#include "eqrh/bqtau.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace eqrh;
using bq::K0ClassB;
using bq::NormalForm;
using numkit::Transversal;

namespace {

const Complex kTau{1.0, -1.0};
const double kTheta = testkit::kGoldenTheta;
const Transversal kT0(kTau, 0.0);

class Seeded : public ::testing::TestWithParam<std::uint64_t> {};

double commutator_bound(const NormalForm& nf) {
  return 1e-9 * (nf.a0.norm() + 1.0) * (nf.b0.norm() + 1.0);
}

NormalForm rand_nf(testkit::Gen& g, int lo, int hi) {
  return testkit::random_normal_form(g, g.integer(lo, hi), kT0, kTheta);
}

}  // namespace

TEST_P(Seeded, RoundTripThroughRepresentations) {
  testkit::Gen g(GetParam());
  const auto rep = testkit::random_rep(g, g.integer(1, 6));
  const NormalForm nf = bq::functor_F(rep, kT0, kTheta);
  const auto back = bq::fiber_omega(nf);
  EXPECT_LT((back.m1 - rep.m1).norm() + (back.m2 - rep.m2).norm(), 1e-8 * (rep.m1.norm() + rep.m2.norm()));

  const NormalForm again = bq::functor_F(back, kT0, kTheta);
  EXPECT_LT((again.a0 - nf.a0).norm(), 1e-8 * (1.0 + nf.a0.norm()));
  EXPECT_LT((again.b0 - nf.b0).norm(), 1e-12 * (1.0 + nf.b0.norm()));
}

TEST_P(Seeded, OperationsKeepACommutingPair) {
  testkit::Gen g(GetParam());
  const NormalForm x = rand_nf(g, 1, 3), y = rand_nf(g, 1, 3);
  for (const NormalForm& z : {bq::tensor(x, y), bq::dual(x), bq::direct_sum(x, y)})
    EXPECT_LE(numkit::commutator_norm(z.a0, z.b0), commutator_bound(z));
  const auto sc = testkit::scramble(g, x, 2);
  const NormalForm n = bq::normalize(sc.object, kT0, 16);
  EXPECT_LE(numkit::commutator_norm(n.a0, n.b0), commutator_bound(n));
}

TEST_P(Seeded, TensorIsCommutativeInK0) {
  testkit::Gen g(GetParam());
  const NormalForm x = rand_nf(g, 1, 3), y = rand_nf(g, 1, 3);
  EXPECT_TRUE(bq::k0_class(bq::tensor(x, y)) == bq::k0_class(bq::tensor(y, x)));
}

TEST_P(Seeded, TensorIsAssociativeOnMonodromy) {
  testkit::Gen g(GetParam());
  const NormalForm x = rand_nf(g, 1, 2), y = rand_nf(g, 1, 2), z = rand_nf(g, 1, 2);
  const auto l = bq::fiber_omega(bq::tensor(bq::tensor(x, y), z));
  const auto r = bq::fiber_omega(bq::tensor(x, bq::tensor(y, z)));
  EXPECT_LT((l.m1 - r.m1).norm(), 1e-8 * (1.0 + l.m1.norm()));
  EXPECT_LT((l.m2 - r.m2).norm(), 1e-10 * (1.0 + l.m2.norm()));
}

TEST_P(Seeded, DoubleDualHasTheSameClass) {
  testkit::Gen g(GetParam());
  const NormalForm x = rand_nf(g, 1, 4);
  EXPECT_TRUE(bq::k0_class(bq::dual(bq::dual(x))) == bq::k0_class(x));
}

TEST_P(Seeded, HomBetweenLinesFollowsLabels) {
  testkit::Gen g(GetParam());
  const Complex z1 = g.in_strip(kTau), b1 = g.nonzero();
  const bool same_z = g.integer(0, 1) == 0, same_b = g.integer(0, 1) == 0;
  const Complex z2 = same_z ? z1 : g.in_strip(kTau);
  const Complex b2 = same_b ? b1 : g.nonzero();
  auto line = [](Complex z, Complex b) {
    return bq::make_normal_form(CMat::Constant(1, 1, z), CMat::Constant(1, 1, b), kT0, kTheta);
  };
  const auto homs = bq::hom_basis(line(z1, b1), line(z2, b2));
  EXPECT_EQ(homs.size(), (same_z && same_b) ? 1u : 0u);
}

TEST_P(Seeded, K0IsAdditiveOnKernelsAndCokernels) {
  testkit::Gen g(GetParam());
  const NormalForm x = rand_nf(g, 1, 3);
  const NormalForm y = bq::direct_sum(x, rand_nf(g, 1, 2));
  const auto homs = bq::hom_basis(x, y);
  ASSERT_FALSE(homs.empty());
  CMat phi = CMat::Zero(y.dim(), x.dim());
  for (const auto& m : homs)
    if (g.integer(0, 2) != 0) phi += g.normal() * m.phi;
  const bq::Morphism m{x, y, phi};
  const auto k = bq::kernel(m), c = bq::cokernel(m);
  const K0ClassB image_from_source = bq::k0_sub(bq::k0_class(x), bq::k0_class(k.object));
  const K0ClassB image_from_target = bq::k0_sub(bq::k0_class(y), bq::k0_class(c.object));
  EXPECT_TRUE(image_from_source == image_from_target);
}

TEST_P(Seeded, NormalizationIsGaugeInvariantInK0) {
  testkit::Gen g(GetParam());
  const NormalForm seed = rand_nf(g, 1, 4);
  const auto sc = testkit::scramble(g, seed, 0);
  EXPECT_TRUE(bq::k0_class(bq::normalize(sc.object, kT0, 16)) == bq::k0_class(seed));
}

TEST_P(Seeded, H0IsAdditive) {
  testkit::Gen g(GetParam());
  const NormalForm u = bq::unit_object(kT0, kTheta);
  const NormalForm x = rand_nf(g, 1, 3);
  const NormalForm y = g.integer(0, 1) == 0 ? u : rand_nf(g, 1, 2);
  EXPECT_EQ(bq::h0_dim(bq::direct_sum(x, y)), bq::h0_dim(x) + bq::h0_dim(y));
}

TEST_P(Seeded, SylvesterMatchesOracle) {
  testkit::Gen g(GetParam());
  const int n = g.integer(1, 8), m = g.integer(1, 8);
  const CMat a = g.matrix(n, n), b = g.matrix(m, m) + 8.0 * CMat::Identity(m, m), c = g.matrix(n, m);
  const CMat x = numkit::solve_sylvester(a, b, c);
  EXPECT_LT((a * x - x * b - c).norm(), 1e-10 * (1.0 + c.norm()));
}

TEST_P(Seeded, SigmaIsMultiplicative) {
  testkit::Gen g(GetParam());
  auto elem = [&] {
    atheta::AElem x(kTheta);
    for (int i = 0; i < 4; ++i) x.add(g.integer(-3, 3), g.integer(-3, 3), g.normal());
    return x;
  };
  const atheta::AElem x = elem(), y = elem();
  for (atheta::Gen letter : {atheta::Gen::g1, atheta::Gen::g2}) {
    const atheta::Word w{letter};
    const auto lhs = atheta::sigma_apply(w, atheta::a_mul(x, y));
    const auto rhs = atheta::a_mul(atheta::sigma_apply(w, x), atheta::sigma_apply(w, y));
    EXPECT_LT((lhs - rhs).max_abs(), 1e-12 * (1.0 + lhs.max_abs()));
  }
}

TEST_P(Seeded, KmapIsAHomomorphism) {
  testkit::Gen g(GetParam());
  K0ClassB x(kT0), y(kT0);
  for (int i = 0; i < 3; ++i) {
    x.add(g.nonzero(), g.in_strip(kTau), g.integer(-2, 2));
    y.add(g.nonzero(), g.in_strip(kTau), g.integer(-2, 2));
  }
  atheta::DivisorXtau sum(kTau);
  const auto kx = atheta::kmap(x), ky = atheta::kmap(y);
  for (const auto& p : kx.points()) sum.add(p.p, p.mult);
  for (const auto& p : ky.points()) sum.add(p.p, p.mult);
  const auto direct = atheta::kmap(bq::k0_add(x, y));
  EXPECT_EQ(direct.degree(), sum.degree());
  EXPECT_TRUE(atheta::divisor_equivalent(direct, sum));
}

INSTANTIATE_TEST_SUITE_P(Seeds, Seeded, ::testing::Range<std::uint64_t>(100, 125));
