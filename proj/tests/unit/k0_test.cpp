#include <cmath>

#include <gtest/gtest.h>

#include "eqrh/bqtau.hpp"
#include "generators.hpp"

using namespace eqrh;
using bq::K0ClassB;
using bq::NormalForm;
using numkit::Transversal;

namespace {

const Complex kTau{1.0, -1.0};
const double kTheta = testkit::kGoldenTheta;
const Transversal kT0(kTau, 0.0);

CMat mat2(Complex a, Complex b, Complex c, Complex d) {
  CMat m(2, 2);
  m << a, b, c, d;
  return m;
}

CMat scalar(Complex x) { return CMat::Constant(1, 1, x); }

NormalForm line(Complex zprime, Complex b, const Transversal& t = kT0) {
  return bq::make_normal_form(scalar(zprime), scalar(b), t, kTheta);
}

}  // namespace

TEST(Decompose, DiagonalObject) {
  const NormalForm nf =
      bq::make_normal_form(mat2(0.5 * kTau, 0.0, 0.0, 0.25 * kTau), mat2(3.0, 0.0, 0.0, 2.0), kT0, kTheta);
  const auto f = bq::decompose(nf);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_LT(std::abs(f[0].lambda - 0.25 * kTau), 1e-13);
  EXPECT_LT(std::abs(f[0].b - 2.0), 1e-13);
  EXPECT_LT(std::abs(f[1].lambda - 0.5 * kTau), 1e-13);
  EXPECT_LT(std::abs(f[1].b - 3.0), 1e-13);
}

TEST(Decompose, NilpotentBlock) {
  const NormalForm nf = bq::make_normal_form(mat2(0.0, 1.0, 0.0, 0.0), CMat::Identity(2, 2), kT0, kTheta);
  const auto f = bq::decompose(nf);
  ASSERT_EQ(f.size(), 2u);
  for (const auto& j : f) {
    EXPECT_LT(std::abs(j.lambda), 1e-13);
    EXPECT_LT(std::abs(j.b - 1.0), 1e-13);
  }
}

TEST(Decompose, TensorOfLinesIsJointSpectrum) {
  testkit::Gen g(41);
  const Complex z1 = g.in_strip(kTau), z2 = g.in_strip(kTau), z3 = g.in_strip(kTau);
  const Complex b1 = g.nonzero(), b2 = g.nonzero(), b3 = g.nonzero();
  const NormalForm x = bq::direct_sum(line(z1, b1), line(z2, b2));
  const NormalForm t = bq::tensor(x, line(z3, b3));
  K0ClassB expected(kT0);
  expected.add(b1 * b3, z1 + z3, 1);
  expected.add(b2 * b3, z2 + z3, 1);
  EXPECT_TRUE(bq::k0_class(t) == expected);
}

TEST(Decompose, RandomNormalFormsSplitCompletely) {
  testkit::Gen g(42);
  for (int i = 0; i < 20; ++i) {
    const int n = g.integer(1, 5);
    const NormalForm nf = testkit::random_normal_form(g, n, kT0, kTheta);
    const auto f = bq::decompose(nf);
    EXPECT_EQ(static_cast<int>(f.size()), n);
    Complex tr_a = 0.0, tr_b = 0.0;
    for (const auto& j : f) {
      tr_a += j.lambda;
      tr_b += j.b;
    }
    EXPECT_LT(std::abs(tr_a - nf.a0.trace()), 1e-7 * (1.0 + nf.a0.norm()));
    EXPECT_LT(std::abs(tr_b - nf.b0.trace()), 1e-7 * (1.0 + nf.b0.norm()));
  }
}

TEST(K0, UnitObject) {
  const K0ClassB c = bq::k0_class(bq::unit_object(kT0, kTheta));
  ASSERT_EQ(c.terms().size(), 1u);
  EXPECT_EQ(c.terms()[0].mult, 1);
  EXPECT_LT(std::abs(c.terms()[0].b - 1.0), 1e-15);
  EXPECT_LT(std::abs(c.terms()[0].zprime), 1e-15);
}

TEST(K0, LabelIsPeriodicInZprime) {
  const Complex zp = 0.3 * kTau + Complex(0.0, 0.2), b(1.5, -0.5);
  const Transversal t1(kTau, 1.0);
  const K0ClassB x = bq::k0_class(line(zp, b), kT0);
  const K0ClassB y = bq::k0_class(line(zp + kTau, b, t1), kT0);
  EXPECT_TRUE(x == y);
  EXPECT_TRUE(K0ClassB::simple(b, zp, kT0) == K0ClassB::simple(b, zp - 3.0 * kTau, kT0));
}

TEST(K0, NilpotentExtensionHasMultiplicityTwo) {
  const Complex zp = 0.4 * kTau, b = 2.0;
  const NormalForm nf = bq::make_normal_form(mat2(zp, 1.0, 0.0, zp), mat2(b, 0.0, 0.0, b), kT0, kTheta);
  const K0ClassB c = bq::k0_class(nf);
  ASSERT_EQ(c.terms().size(), 1u);
  EXPECT_EQ(c.terms()[0].mult, 2);
  EXPECT_EQ(c.rank(), 2);
}

TEST(K0, EdgeCollisionsSnapToTheLeftEdge) {
  const Complex b = 1.0;
  K0ClassB c(kT0);
  c.add(b, 1e-12 * kTau, 1);
  c.add(b, (1.0 - 1e-12) * kTau, 1);
  ASSERT_EQ(c.terms().size(), 1u);
  EXPECT_EQ(c.terms()[0].mult, 2);
}

TEST(K0, AdditionAndSubtraction) {
  const K0ClassB x = K0ClassB::simple(2.0, 0.1 * kTau, kT0);
  const K0ClassB y = K0ClassB::simple(3.0, 0.5 * kTau, kT0);
  const K0ClassB s = bq::k0_add(x, y);
  EXPECT_EQ(s.rank(), 2);
  EXPECT_TRUE(bq::k0_sub(s, y) == x);
  EXPECT_TRUE(bq::k0_sub(x, x).empty());
  EXPECT_FALSE(x == y);
}

TEST(K0, BAndZprimeAreBothPartOfTheKey) {
  EXPECT_FALSE(K0ClassB::simple(2.0, 0.1 * kTau, kT0) == K0ClassB::simple(3.0, 0.1 * kTau, kT0));
  EXPECT_FALSE(K0ClassB::simple(2.0, 0.1 * kTau, kT0) == K0ClassB::simple(2.0, 0.2 * kTau, kT0));
}

TEST(K0, ZeroBIsRejected) {
  K0ClassB c(kT0);
  EXPECT_THROW(c.add(0.0, 0.1 * kTau, 1), Error);
}

TEST(H0, Examples) {
  EXPECT_EQ(bq::h0_dim(line(0.0, 1.0)), 1);
  EXPECT_EQ(bq::h0_dim(line(0.5 * kTau, 1.0)), 0);
  const Transversal low(kTau, -1.0), lower(kTau, -2.0);
  EXPECT_EQ(bq::h0_dim(line(-kTau, 1.0, low)), 1);
  EXPECT_EQ(bq::h0_dim(line(-2.0 * kTau, 1.0, lower)), 1);
}

TEST(H0, UnitAndDirectSums) {
  const NormalForm u = bq::unit_object(kT0, kTheta);
  EXPECT_EQ(bq::h0_dim(u), 1);
  const NormalForm x = line(0.5 * kTau, 2.0);
  EXPECT_EQ(bq::h0_dim(bq::direct_sum(u, u)), 2);
  EXPECT_EQ(bq::h0_dim(bq::direct_sum(u, x)), 1);
  const NormalForm jordan = bq::make_normal_form(mat2(0.0, 1.0, 0.0, 0.0), CMat::Identity(2, 2), kT0, kTheta);
  EXPECT_EQ(bq::h0_dim(jordan), 1);
}
