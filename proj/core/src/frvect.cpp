#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "eqrh/atheta.hpp"

namespace eqrh::atheta {

void FrVectObj::validate() const {
  if (n < 0 || static_cast<int>(conn.size()) != n) fail(ErrorKind::DimensionMismatch, "connection has wrong size");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(conn[i].size()) != n) fail(ErrorKind::DimensionMismatch, "connection row has wrong size");
    for (int j = 0; j < n; ++j) {
      const AElem& e = conn[i][j];
      if (e.theta() != theta) fail(ErrorKind::ParameterMismatch, "entry over a different theta");
      if (j < i && !e.is_zero()) {
        std::ostringstream os;
        os << "entry (" << i << "," << j << ") below the diagonal is nonzero";
        fail(ErrorKind::InvalidArgument, os.str());
      }
      if (j == i)
        for (const auto& [k, c] : e.coeffs())
          if (k != Monomial{0, 0}) {
            std::ostringstream os;
            os << "diagonal entry " << i << " is not a scalar";
            fail(ErrorKind::InvalidArgument, os.str());
          }
    }
  }
}

std::vector<Complex> FrVectObj::diagonal_parameters() const {
  std::vector<Complex> out;
  for (int i = 0; i < n; ++i) out.push_back(conn[i][i].coeff(0, 0) / kTwoPiI);
  return out;
}

FrVectObj zero_connection(int n, double theta, Complex tau) {
  FrVectObj obj;
  obj.n = n;
  obj.theta = theta;
  obj.tau = tau;
  obj.conn.assign(n, std::vector<AElem>(n, AElem(theta)));
  return obj;
}

std::vector<AElem> apply_connection(const FrVectObj& obj, const std::vector<AElem>& v) {
  if (static_cast<int>(v.size()) != obj.n) fail(ErrorKind::DimensionMismatch, "vector has wrong length");
  std::vector<AElem> out;
  for (int i = 0; i < obj.n; ++i) {
    AElem acc = delta_tau(v[i], obj.tau);
    for (int j = 0; j < obj.n; ++j) acc = acc + a_mul(obj.conn[i][j], v[j]);
    out.push_back(std::move(acc));
  }
  return out;
}

PsiStar psi_star(const bq::NormalForm& nf) {
  const int n = nf.dim();
  PsiStar out{zero_connection(n, nf.theta, nf.tau()), CMat::Identity(n, n)};
  if (n == 0) return out;
  CMat t = nf.a0;
  if (!numkit::is_upper_triangular(t)) {
    Eigen::ComplexSchur<CMat> schur(nf.a0);
    if (schur.info() != Eigen::Success) fail(ErrorKind::ConvergenceFailure, "Schur form of A0 failed");
    out.basis = schur.matrixU();
    t = schur.matrixT();
  }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out.bundle.conn[i][j].add(0, 0, kTwoPiI * t(i, j));
  return out;
}

namespace {

std::vector<AElem> probes(double theta) {
  std::vector<AElem> out;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b) out.push_back(AElem::monomial(a, b, Complex(1.0 + a, 0.5 * b), theta));
  AElem mixed = AElem::unit(theta);
  mixed.add(1, -1, Complex(0.0, 2.0));
  mixed.add(-3, 2, 0.25);
  out.push_back(mixed);
  return out;
}

}  // namespace

ExtensionCheck extension_residuals(const FrVectObj& big, Complex zprime, const FrVectObj& quotient) {
  if (big.n != quotient.n + 1) fail(ErrorKind::DimensionMismatch, "extension must have rank sub + 1");
  ExtensionCheck out{big, 0.0, 0.0};
  FrVectObj line = zero_connection(1, big.theta, big.tau);
  line.conn[0][0].add(0, 0, kTwoPiI * zprime);
  const AElem zero(big.theta);

  for (const auto& f : probes(big.theta)) {
    // iota(f) = (f, 0, ..., 0)
    std::vector<AElem> v(big.n, zero);
    v[0] = f;
    const auto lhs = apply_connection(big, v);
    const auto rhs = apply_connection(line, {f});
    out.iota_residual = std::max(out.iota_residual, (lhs[0] - rhs[0]).max_abs());
    for (int i = 1; i < big.n; ++i) out.iota_residual = std::max(out.iota_residual, lhs[i].max_abs());

    // pi drops the first coordinate; probe each coordinate in turn.
    for (int c = 0; c < big.n; ++c) {
      std::vector<AElem> w(big.n, zero);
      w[c] = f;
      const auto image = apply_connection(big, w);
      std::vector<AElem> pw(w.begin() + 1, w.end());
      const auto down = apply_connection(quotient, pw);
      for (int i = 1; i < big.n; ++i)
        out.pi_residual = std::max(out.pi_residual, (image[i] - down[i - 1]).max_abs());
    }
  }
  return out;
}

ExtensionCheck build_extension(Complex zprime, const std::vector<AElem>& row, const FrVectObj& sub) {
  sub.validate();
  if (static_cast<int>(row.size()) != sub.n) {
    std::ostringstream os;
    os << "row has length " << row.size() << ", expected " << sub.n;
    fail(ErrorKind::DimensionMismatch, os.str());
  }
  FrVectObj big = zero_connection(sub.n + 1, sub.theta, sub.tau);
  big.conn[0][0].add(0, 0, kTwoPiI * zprime);
  for (int j = 0; j < sub.n; ++j) {
    if (row[j].theta() != sub.theta) fail(ErrorKind::ParameterMismatch, "row entry over a different theta");
    big.conn[0][j + 1] = row[j];
    for (int i = 0; i < sub.n; ++i) big.conn[i + 1][j + 1] = sub.conn[i][j];
  }
  big.validate();
  return extension_residuals(big, zprime, sub);
}

// --- standard bundles and stability ------------------------------------------------

StdBundleData std_bundle_data(std::int64_t m, std::int64_t n, double theta) {
  if (std::gcd(m, n) != 1) {
    std::ostringstream os;
    os << "(" << m << ", " << n << ") is not a coprime pair";
    fail(ErrorKind::InvalidArgument, os.str());
  }
  const double rk = static_cast<double>(m) * theta + static_cast<double>(n);
  if (!(rk > 0.0)) {
    std::ostringstream os;
    os << "rank m theta + n = " << rk << " is not positive";
    fail(ErrorKind::InvalidArgument, os.str());
  }
  return {m, rk, static_cast<double>(m) / rk};
}

PsSwap ps_k_swap(std::int64_t m, std::int64_t n, double theta) {
  return {-m, static_cast<double>(m) * theta + static_cast<double>(n), m == 0};
}

Complex stability_Z(std::int64_t m, std::int64_t n, double theta) {
  if (m == 0 && n == 0) fail(ErrorKind::InvalidArgument, "the zero class has no central charge");
  const double rk = static_cast<double>(m) * theta + static_cast<double>(n);
  if (rk < 0.0) fail(ErrorKind::InvalidArgument, "m theta + n must be nonnegative");
  return {-static_cast<double>(m), rk};
}

double phase(std::int64_t m, std::int64_t n, double theta) {
  const Complex z = stability_Z(m, n, theta);
  if (z.imag() == 0.0 && z.real() > 0.0) fail(ErrorKind::InvalidArgument, "phase 0 lies outside (0, 1]");
  return std::atan2(z.imag(), z.real()) / kPi;
}

}  // namespace eqrh::atheta
