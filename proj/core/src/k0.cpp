#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "bq_internal.hpp"
#include "eqrh/bqtau.hpp"

namespace eqrh::bq {

namespace {

// Nullspace with a looser relative threshold, for eigenspaces of clustered
// eigenvalues.
CMat eigenspace(const CMat& m, double floor, const Tolerances& tol) {
  Tolerances loose = tol;
  loose.eps_res = std::max(tol.eps_res, 10.0 * tol.eps_spec);
  return numkit::nullspace(m, loose, floor);
}

// Lexicographic on (Re l, Im l, Re b, Im b), treating values within eps as equal.
bool key_less(const std::array<double, 4>& x, const std::array<double, 4>& y, double eps) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (std::abs(x[i] - y[i]) <= eps) continue;
    return x[i] < y[i];
  }
  return false;
}

}  // namespace

std::vector<JointEigen> decompose(const NormalForm& nf, const Tolerances& tol) {
  CMat a = nf.a0, b = nf.b0;
  std::vector<JointEigen> out;
  const double scale = std::max(1.0, a.norm() + b.norm());
  const double accept = std::sqrt(tol.eps_res) * scale;

  while (a.rows() > 0) {
    const Eigen::Index m = a.rows();
    const auto sd = numkit::spectral(a, tol);
    bool found = false;
    std::array<double, 4> best_key{};
    JointEigen best{};
    CVec best_w;
    for (const auto& cl : sd.clusters) {
      const CMat e = eigenspace(a - cl.eigenvalue * CMat::Identity(m, m), std::max(1.0, a.norm()), tol);
      if (e.cols() == 0) continue;
      const CMat be = e.adjoint() * b * e;
      Eigen::ComplexEigenSolver<CMat> es(be);
      if (es.info() != Eigen::Success) continue;
      for (Eigen::Index i = 0; i < be.rows(); ++i) {
        const Complex beta = es.eigenvalues()(i);
        const std::array<double, 4> key{cl.eigenvalue.real(), cl.eigenvalue.imag(), beta.real(), beta.imag()};
        if (found && !key_less(key, best_key, tol.eps_key)) continue;
        CVec w = e * es.eigenvectors().col(i);
        w.normalize();
        found = true;
        best_key = key;
        best = {cl.eigenvalue, beta};
        best_w = std::move(w);
      }
    }
    if (!found) fail(ErrorKind::CommonEigenvectorFailure, "no eigenvector of A0 found");
    const double ra = (a * best_w - best.lambda * best_w).norm();
    const double rb = (b * best_w - best.b * best_w).norm();
    if (ra > accept || rb > accept) {
      std::ostringstream os;
      os << "common eigenvector residuals " << ra << ", " << rb << " exceed " << accept;
      fail(ErrorKind::CommonEigenvectorFailure, os.str());
    }
    out.push_back(best);
    const CMat c = numkit::nullspace(best_w.adjoint(), tol);
    a = c.adjoint() * a * c;
    b = c.adjoint() * b * c;
  }
  return out;
}

// --- K0 ----------------------------------------------------------------------------

K0ClassB::K0ClassB(const Transversal& ambient, const Tolerances& tol) : ambient_(ambient), tol_(tol) {}

K0ClassB K0ClassB::simple(Complex b, Complex zprime, const Transversal& ambient, const Tolerances& tol) {
  K0ClassB c(ambient, tol);
  c.add(b, zprime, 1);
  return c;
}

void K0ClassB::add(Complex b, Complex zprime, std::int64_t mult) {
  if (b == Complex(0.0) || !std::isfinite(std::abs(b))) fail(ErrorKind::InvalidArgument, "b must lie in C*");
  if (mult == 0) return;
  Complex z = numkit::reduce_mod_transversal(zprime, ambient_).representative;
  if (ambient_.coordinate(z) > ambient_.offset() + 1.0 - tol_.eps_key) z -= ambient_.tau();

  const double zr = tol_.eps_key * std::max(1.0, std::abs(ambient_.tau()));
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (std::abs(it->b - b) <= tol_.eps_key * std::max(1.0, std::abs(b)) && std::abs(it->zprime - z) <= zr) {
      it->mult += mult;
      if (it->mult == 0) terms_.erase(it);
      return;
    }
  }
  Term t{b, z, mult};
  auto pos = std::lower_bound(terms_.begin(), terms_.end(), t, [](const Term& x, const Term& y) {
    const std::array<double, 4> kx{x.zprime.real(), x.zprime.imag(), x.b.real(), x.b.imag()};
    const std::array<double, 4> ky{y.zprime.real(), y.zprime.imag(), y.b.real(), y.b.imag()};
    return kx < ky;
  });
  terms_.insert(pos, t);
}

std::int64_t K0ClassB::rank() const {
  std::int64_t r = 0;
  for (const auto& t : terms_) r += t.mult;
  return r;
}

namespace {

void require_same_tau(const K0ClassB& x, const K0ClassB& y) {
  const Complex tx = x.ambient().tau(), ty = y.ambient().tau();
  if (std::abs(tx - ty) > 1e-12 * std::max(1.0, std::abs(tx)))
    fail(ErrorKind::ParameterMismatch, "K0 classes over different tau");
}

}  // namespace

K0ClassB k0_add(const K0ClassB& x, const K0ClassB& y) {
  require_same_tau(x, y);
  K0ClassB out = x;
  for (const auto& t : y.terms()) out.add(t.b, t.zprime, t.mult);
  return out;
}

K0ClassB k0_sub(const K0ClassB& x, const K0ClassB& y) {
  require_same_tau(x, y);
  K0ClassB out = x;
  for (const auto& t : y.terms()) out.add(t.b, t.zprime, -t.mult);
  return out;
}

bool operator==(const K0ClassB& x, const K0ClassB& y) {
  require_same_tau(x, y);
  return k0_sub(x, y).empty();
}

K0ClassB k0_class(const NormalForm& nf, const Tolerances& tol) { return k0_class(nf, nf.transversal, tol); }

K0ClassB k0_class(const NormalForm& nf, const Transversal& ambient, const Tolerances& tol) {
  K0ClassB out(ambient, tol);
  for (const auto& f : decompose(nf, tol)) out.add(f.b, f.lambda, 1);
  return out;
}

// --- H0 ----------------------------------------------------------------------------

int h0_dim(const NormalForm& nf, const Tolerances& tol) {
  const int n = nf.dim();
  if (n == 0) return 0;
  const Complex tau = nf.tau();
  const auto sd = numkit::spectral(nf.a0, tol);
  int total = 0;
  std::vector<std::int64_t> seen;
  for (const auto& cl : sd.clusters) {
    const Complex s = cl.eigenvalue / tau;
    const auto k = static_cast<std::int64_t>(-std::llround(s.real()));
    const Complex residue = cl.eigenvalue + tau * static_cast<double>(k);
    if (std::abs(residue) > 10.0 * tol.eps_spec * std::max(1.0, std::abs(cl.eigenvalue))) continue;
    if (std::find(seen.begin(), seen.end(), k) != seen.end()) continue;
    seen.push_back(k);
    total += static_cast<int>(
        eigenspace(nf.a0 + (tau * static_cast<double>(k)) * CMat::Identity(n, n),
                   std::max(1.0, nf.a0.norm()), tol).cols());
  }
  return total;
}

}  // namespace eqrh::bq
