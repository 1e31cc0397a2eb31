#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "eqrh/laurent.hpp"
#include "generators.hpp"

using namespace eqrh;
using laurent::Params;
using laurent::PolyMat;

namespace {

const Complex kTau{1.0, -1.0};
const Params kParams = Params::from_theta(kTau, testkit::kGoldenTheta);

CMat mat2(Complex a, Complex b, Complex c, Complex d) {
  CMat m(2, 2);
  m << a, b, c, d;
  return m;
}

double distance(const PolyMat& f, const PolyMat& g) { return (f - g).norm(); }

PolyMat random_poly(testkit::Gen& g, int n, int lo, int hi) {
  PolyMat p(n, kParams);
  for (int k = lo; k <= hi; ++k) p.set(k, g.matrix(n, n));
  return p;
}

}  // namespace

TEST(PolyMat, ArithmeticExamples) {
  testkit::Gen g(1);
  const PolyMat f = random_poly(g, 2, -1, 2);
  EXPECT_EQ(distance(f + PolyMat(2, kParams), f), 0.0);

  const PolyMat z = PolyMat::monomial(CMat::Identity(2, 2), 1, kParams);
  const PolyMat zinv = PolyMat::monomial(CMat::Identity(2, 2), -1, kParams);
  EXPECT_EQ(distance(z * zinv, PolyMat::identity(2, kParams)), 0.0);

  const CMat a0 = g.matrix(2, 2), a1 = g.matrix(2, 2), b0 = g.matrix(2, 2);
  PolyMat a(2, kParams);
  a.set(0, a0);
  a.set(1, a1);
  const PolyMat prod = a * PolyMat::constant(b0, kParams);
  EXPECT_LT((prod.coeff(0) - a0 * b0).norm(), 1e-15);
  EXPECT_LT((prod.coeff(1) - a1 * b0).norm(), 1e-15);
  EXPECT_FALSE(prod.lowest_power() != 0);
  EXPECT_EQ(prod.highest_power(), 1);
}

TEST(PolyMat, ZeroCoefficientsAreNotStored) {
  PolyMat p(2, kParams);
  p.set(3, CMat::Zero(2, 2));
  EXPECT_TRUE(p.is_zero());
  p.set(1, CMat::Identity(2, 2));
  p.add_to(1, -CMat::Identity(2, 2));
  EXPECT_TRUE(p.is_zero());
  EXPECT_FALSE(p.lowest_power().has_value());
}

TEST(PolyMat, MismatchedParametersAreRejected) {
  const PolyMat f = PolyMat::identity(2, kParams);
  const PolyMat g = PolyMat::identity(2, Params::from_theta(kTau, 0.25));
  const PolyMat h = PolyMat::identity(3, kParams);
  EXPECT_THROW(f + g, Error);
  EXPECT_THROW(f * h, Error);
}

TEST(PolyMat, MulTruncatedDropsHighPowers) {
  testkit::Gen g(2);
  const PolyMat f = random_poly(g, 2, 0, 3), h = random_poly(g, 2, 0, 3);
  const PolyMat full = f * h;
  const PolyMat cut = laurent::mul_truncated(f, h, 2);
  EXPECT_EQ(cut.highest_power(), 2);
  for (int k = 0; k <= 2; ++k) EXPECT_LT((cut.coeff(k) - full.coeff(k)).norm(), 1e-14);
}

TEST(Delta, Examples) {
  const CMat i2 = CMat::Identity(2, 2);
  EXPECT_TRUE(laurent::delta_apply(PolyMat::constant(i2, kParams)).is_zero());
  const PolyMat dz = laurent::delta_apply(PolyMat::monomial(i2, 1, kParams));
  EXPECT_LT((dz.coeff(1) - kTau * i2).norm(), 1e-15);
  const PolyMat dz2 = laurent::delta_apply(PolyMat::monomial(i2, -2, kParams));
  EXPECT_LT((dz2.coeff(-2) + 2.0 * kTau * i2).norm(), 1e-15);
}

TEST(Delta, LeibnizRule) {
  testkit::Gen g(3);
  for (int i = 0; i < 10; ++i) {
    const PolyMat f = random_poly(g, 3, -2, 2), h = random_poly(g, 3, -1, 3);
    const PolyMat lhs = laurent::delta_apply(f * h);
    const PolyMat rhs = laurent::delta_apply(f) * h + f * laurent::delta_apply(h);
    EXPECT_LT(distance(lhs, rhs), 1e-12 * (1.0 + lhs.norm()));
  }
}

TEST(QDilate, Examples) {
  const CMat i2 = CMat::Identity(2, 2);
  const PolyMat c = PolyMat::constant(i2, kParams);
  EXPECT_EQ(distance(laurent::q_dilate(c), c), 0.0);
  const PolyMat z = laurent::q_dilate(PolyMat::monomial(i2, 1, kParams));
  EXPECT_LT((z.coeff(1) - kParams.q * i2).norm(), 1e-15);
  const PolyMat zinv = laurent::q_dilate(PolyMat::monomial(i2, -1, kParams));
  EXPECT_LT((zinv.coeff(-1) - i2 / kParams.q).norm(), 1e-15);
}

TEST(QDilate, IsMultiplicative) {
  testkit::Gen g(4);
  const PolyMat f = random_poly(g, 2, -2, 2), h = random_poly(g, 2, -1, 3);
  EXPECT_LT(distance(laurent::q_dilate(f * h), laurent::q_dilate(f) * laurent::q_dilate(h)), 1e-12);
}

TEST(TruncatedInverse, Examples) {
  const CMat i2 = CMat::Identity(2, 2);
  EXPECT_EQ(distance(laurent::truncated_inverse(PolyMat::identity(2, kParams), 4), PolyMat::identity(2, kParams)),
            0.0);

  const CMat nil = mat2(0.0, 1.0, 0.0, 0.0);
  PolyMat f = PolyMat::identity(2, kParams);
  f.set(1, nil);
  PolyMat expected = PolyMat::identity(2, kParams);
  expected.set(1, -nil);
  EXPECT_LT(distance(laurent::truncated_inverse(f, 2), expected), 1e-15);

  PolyMat s(1, kParams);
  s.set(0, CMat::Constant(1, 1, 2.0));
  s.set(1, CMat::Constant(1, 1, 1.0));
  const PolyMat inv = laurent::truncated_inverse(s, 1);
  EXPECT_NEAR(std::abs(inv.coeff(0)(0, 0) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(inv.coeff(1)(0, 0) + 0.25), 0.0, 1e-15);
  EXPECT_FALSE(inv.highest_power() > 1);
  (void)i2;
}

TEST(TruncatedInverse, ProductIsIdentityToOrder) {
  testkit::Gen g(5);
  for (int i = 0; i < 10; ++i) {
    const int n = g.integer(1, 4);
    PolyMat f = random_poly(g, n, 1, 4);
    f.set(0, g.invertible(n));
    const int k = g.integer(2, 10);
    const PolyMat inv = laurent::truncated_inverse(f, k);
    const PolyMat prod = laurent::mul_truncated(f, inv, k);
    EXPECT_LT(distance(prod, PolyMat::identity(n, kParams)), 1e-13 * (1.0 + f.norm() * inv.norm()));
  }
}

TEST(TruncatedInverse, SingularConstantTermFails) {
  PolyMat f(2, kParams);
  f.set(0, mat2(1.0, 0.0, 0.0, 0.0));
  EXPECT_THROW(laurent::truncated_inverse(f, 3), Error);
}

TEST(GaugeTransform, Examples) {
  testkit::Gen g(6);
  const PolyMat a = random_poly(g, 2, 0, 3);
  const auto same = laurent::gauge_transform(a, PolyMat::identity(2, kParams), 8);
  EXPECT_LT(distance(same.value, a), 1e-15);

  const Complex zp(0.3, 0.1);
  const PolyMat a1 = PolyMat::constant(CMat::Constant(1, 1, zp), kParams);
  for (int n = -3; n <= 3; ++n) {
    const auto r = laurent::gauge_transform(a1, PolyMat::monomial(CMat::Identity(1, 1), n, kParams), 8);
    EXPECT_TRUE(r.exact);
    EXPECT_LT(std::abs(r.value.coeff(0)(0, 0) - (zp + static_cast<double>(n) * kTau)), 1e-14);
  }
}

TEST(GaugeTransform, ShearOfTwoByTwoConstantTerm) {
  // A = diag(l1, l2) + [[a(z), b(z)], [c(z), d(z)]] with a, b, c, d vanishing at 0.
  testkit::Gen g(7);
  const Complex l1 = g.normal(), l2 = g.normal();
  PolyMat a = PolyMat::constant(mat2(l1, 0.0, 0.0, l2), kParams);
  std::vector<CMat> tail;
  for (int k = 1; k <= 3; ++k) {
    tail.push_back(g.matrix(2, 2));
    a.set(k, tail.back());
  }
  PolyMat p(2, kParams);
  p.set(0, mat2(1.0, 0.0, 0.0, 0.0));
  p.set(1, mat2(0.0, 0.0, 0.0, 1.0));
  const auto r = laurent::gauge_transform(a, p, 8);
  ASSERT_TRUE(r.exact);
  const CMat c0 = r.value.coeff(0);
  EXPECT_LT(std::abs(c0(0, 0) - l1), 1e-14);
  EXPECT_LT(std::abs(c0(0, 1)), 1e-14);
  EXPECT_LT(std::abs(c0(1, 0) - tail[0](1, 0)), 1e-14);
  EXPECT_LT(std::abs(c0(1, 1) - (l2 + kTau)), 1e-14);
  EXPECT_LT(std::abs(r.value.coeff(1)(0, 1)), 1e-14);
  EXPECT_LT(std::abs(r.value.coeff(2)(0, 1) - tail[0](0, 1)), 1e-14);
}

TEST(GaugeTransform, SeriesGaugeAgreesWithDefinition) {
  testkit::Gen g(8);
  for (int i = 0; i < 10; ++i) {
    const int n = g.integer(1, 4);
    const PolyMat a = random_poly(g, n, 0, 3);
    const auto gauge = testkit::random_poly_gauge(g, n, kParams, 2, 0.3);
    const int k = 12;
    const auto r = laurent::gauge_transform(a, gauge.g, k);
    const PolyMat direct = (gauge.ginv * a * gauge.g + gauge.ginv * laurent::delta_apply(gauge.g)).truncated(k);
    EXPECT_LT(distance(r.value, direct), 1e-10 * (1.0 + direct.norm()));
  }
}

TEST(GaugeTransform, ComposesAsARightAction) {
  testkit::Gen g(9);
  const int n = 3;
  const PolyMat a = random_poly(g, n, 0, 2);
  const auto p = testkit::random_poly_gauge(g, n, kParams, 1, 0.3);
  const auto q = testkit::random_poly_gauge(g, n, kParams, 1, 0.3);
  const int k = 10;
  const PolyMat step = laurent::gauge_transform(laurent::gauge_transform(a, p.g, 20).value, q.g, k).value;
  const PolyMat once = laurent::gauge_transform(a, p.g * q.g, k).value;
  EXPECT_LT(distance(step, once), 1e-9 * (1.0 + once.norm()));
}

TEST(Shear, ZeroShiftsLeaveAUnchanged) {
  testkit::Gen g(10);
  PolyMat a = random_poly(g, 3, 0, 2);
  const auto sd = numkit::spectral(a.coeff(0));
  const std::vector<int> e(sd.clusters.size(), 0);
  const auto r = laurent::shear(a, sd, e);
  EXPECT_EQ(distance(r.a, a), 0.0);
}

TEST(Shear, RemovesNilpotentCoupling) {
  PolyMat a = PolyMat::constant(mat2(0.0, 0.0, 0.0, kTau), kParams);
  a.set(1, mat2(0.0, 1.0, 0.0, 0.0));
  const auto sd = numkit::spectral(a.coeff(0));
  std::vector<int> e(sd.clusters.size(), 0);
  for (std::size_t j = 0; j < sd.clusters.size(); ++j)
    if (std::abs(sd.clusters[j].eigenvalue - kTau) < 1e-12) e[j] = -1;
  const auto r = laurent::shear(a, sd, e);
  ASSERT_TRUE(r.a.is_constant());
  const CMat c = r.a.coeff(0);
  EXPECT_LT(c.diagonal().norm(), 1e-14);
  EXPECT_LT(std::abs(c(1, 0)), 1e-14);
  EXPECT_NEAR(std::abs(c(0, 1)), 1.0, 1e-14);

  const auto direct = laurent::gauge_transform(a, laurent::shear_gauge(r.record, kParams), 4);
  EXPECT_LT(distance(direct.value, r.a), 1e-14);
}

TEST(Shear, ReducesResonantGapByOne) {
  testkit::Gen g(11);
  const int k = 3;
  const Complex l2 = 0.25 * kTau;
  PolyMat a = PolyMat::constant(mat2(l2 + static_cast<double>(k) * kTau, 0.0, 0.0, l2), kParams);
  for (int p = 1; p <= 4; ++p) a.set(p, g.matrix(2, 2));
  const auto sd = numkit::spectral(a.coeff(0));
  std::vector<int> e(sd.clusters.size(), 0);
  for (std::size_t j = 0; j < sd.clusters.size(); ++j)
    if (std::abs(sd.clusters[j].eigenvalue - l2) < 1e-12) e[j] = 1;
  const auto r = laurent::shear(a, sd, e);
  Eigen::ComplexEigenSolver<CMat> es(r.a.coeff(0));
  const Complex gap = es.eigenvalues()(0) - es.eigenvalues()(1);
  EXPECT_NEAR(std::abs(gap), std::abs(static_cast<double>(k - 1) * kTau), 1e-12);
}

TEST(Shear, NegativePowerIsRejected) {
  PolyMat a = PolyMat::constant(mat2(0.0, 0.0, 0.0, 0.5 * kTau), kParams);
  a.set(1, mat2(0.0, 0.0, 1.0, 0.0));
  const auto sd = numkit::spectral(a.coeff(0));
  std::vector<int> e(sd.clusters.size(), 0);
  for (std::size_t j = 0; j < sd.clusters.size(); ++j)
    if (std::abs(sd.clusters[j].eigenvalue) < 1e-12) e[j] = -2;
  try {
    laurent::shear(a, sd, e);
    FAIL() << "expected RegularityViolation";
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::RegularityViolation);
  }
}

TEST(Shear, UnshearInvertsShear) {
  testkit::Gen g(12);
  PolyMat a = PolyMat::constant(mat2(0.2 * kTau, 0.0, 0.0, 0.6 * kTau), kParams);
  a.set(1, g.matrix(2, 2));
  a.set(2, g.matrix(2, 2));
  PolyMat b = PolyMat::constant(mat2(g.nonzero(), 0.0, 0.0, g.nonzero()), kParams);
  const auto sd = numkit::spectral(a.coeff(0));
  std::vector<int> e(sd.clusters.size(), 0);
  e[0] = 1;
  const auto r = laurent::shear(a, sd, e);
  const PolyMat b1 = laurent::shear_equivariance(b, r.record);
  EXPECT_LT(distance(laurent::unshear(r.a, r.record), a), 1e-13);
  EXPECT_LT(distance(laurent::unshear_equivariance(b1, r.record), b), 1e-13);
}

TEST(TwistEquivariance, MonomialGaugeScalesByQ) {
  const Complex b(2.0, 0.5);
  const PolyMat b1 = PolyMat::constant(CMat::Constant(1, 1, b), kParams);
  const auto r = laurent::twist_equivariance(b1, PolyMat::monomial(CMat::Identity(1, 1), 2, kParams), 4);
  EXPECT_TRUE(r.exact);
  EXPECT_LT(std::abs(r.value.coeff(0)(0, 0) - kParams.q * kParams.q * b), 1e-14);
}
