#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/SVD>

#include "eqrh/atheta.hpp"

namespace eqrh::atheta {

std::pair<double, double> lattice_coordinates(Complex z, Complex tau) {
  if (tau.imag() == 0.0) fail(ErrorKind::InvalidArgument, "tau must not be real");
  const double t = z.imag() / tau.imag();
  return {z.real() - t * tau.real(), t};
}

Complex reduce_mod_lattice(Complex z, Complex tau, double eps) {
  auto [s, t] = lattice_coordinates(z, tau);
  s -= std::floor(s);
  t -= std::floor(t);
  if (s >= 1.0 - eps) s -= 1.0;
  if (t >= 1.0 - eps) t -= 1.0;
  if (std::abs(s) <= eps) s = 0.0;
  if (std::abs(t) <= eps) t = 0.0;
  return s + t * tau;
}

DivisorXtau::DivisorXtau(Complex tau, const Tolerances& tol) : tau_(tau), tol_(tol) {
  if (tau.imag() == 0.0) fail(ErrorKind::InvalidArgument, "tau must not be real");
}

void DivisorXtau::add(Complex z, std::int64_t mult) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) fail(ErrorKind::InvalidArgument, "non-finite point");
  if (mult == 0) return;
  const Complex p = reduce_mod_lattice(z, tau_, tol_.eps_key);
  const double radius = tol_.eps_key * std::max(1.0, std::abs(tau_));
  for (auto it = points_.begin(); it != points_.end(); ++it)
    if (std::abs(it->p - p) <= radius) {
      it->mult += mult;
      if (it->mult == 0) points_.erase(it);
      return;
    }
  Point pt{p, mult};
  auto pos = std::lower_bound(points_.begin(), points_.end(), pt, [&](const Point& x, const Point& y) {
    return lattice_coordinates(x.p, tau_) < lattice_coordinates(y.p, tau_);
  });
  points_.insert(pos, pt);
}

std::int64_t DivisorXtau::degree() const {
  std::int64_t d = 0;
  for (const auto& p : points_) d += p.mult;
  return d;
}

Complex DivisorXtau::weighted_sum() const {
  Complex s = 0.0;
  for (const auto& p : points_) s += static_cast<double>(p.mult) * p.p;
  return s;
}

DivisorXtau kmap(const bq::K0ClassB& c) {
  DivisorXtau d(c.ambient().tau(), c.tolerances());
  for (const auto& t : c.terms()) d.add(-t.zprime, t.mult);
  return d;
}

bool divisor_equivalent(const DivisorXtau& d1, const DivisorXtau& d2, const Tolerances& tol) {
  if (std::abs(d1.tau() - d2.tau()) > 1e-12 * std::max(1.0, std::abs(d1.tau())))
    fail(ErrorKind::ParameterMismatch, "divisors over different tau");
  if (d1.degree() != d2.degree()) return false;
  const auto [s, t] = lattice_coordinates(d1.weighted_sum() - d2.weighted_sum(), d1.tau());
  return std::abs(s - std::round(s)) <= tol.eps_key && std::abs(t - std::round(t)) <= tol.eps_key;
}

// --- Nori-finiteness ---------------------------------------------------------------

NoriReport nori_check(const CMat& m, int d_max, const Tolerances& tol) {
  if (d_max < 1) fail(ErrorKind::InvalidArgument, "d_max must be at least 1");
  if (m.rows() != m.cols()) fail(ErrorKind::NonSquare, "monodromy must be square");
  NoriReport out;
  if (m.rows() > 0 && !m.allFinite()) fail(ErrorKind::InvalidArgument, "non-finite entries");
  const auto sd = numkit::spectral(m, tol);
  const double scale = std::max(1.0, m.norm());
  if (m.rows() > 0) {
    Eigen::JacobiSVD<CMat> svd(m);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= tol.eps_res * sv(0)) fail(ErrorKind::SingularMatrix, "monodromy is singular");
  }

  out.finite = true;
  out.order = 1;
  for (std::size_t j = 0; j < sd.clusters.size(); ++j) {
    const auto& cl = sd.clusters[j];
    const int r0 = sd.offsets[j], size = cl.multiplicity;
    const CMat nil = sd.block_form.block(r0, r0, size, size) - cl.eigenvalue * CMat::Identity(size, size);
    std::ostringstream os;
    if (nil.norm() > tol.eps_spec * scale) {
      os << "eigenvalue " << cl.eigenvalue << " has a nilpotent part of norm " << nil.norm();
      out.reasons.push_back(os.str());
      out.finite = false;
      continue;
    }
    if (std::abs(std::abs(cl.eigenvalue) - 1.0) > tol.eps_spec) {
      os << "eigenvalue " << cl.eigenvalue << " is off the unit circle";
      out.reasons.push_back(os.str());
      out.finite = false;
      continue;
    }
    Complex p = 1.0;
    int order = 0;
    for (int d = 1; d <= d_max; ++d) {
      p *= cl.eigenvalue;
      if (std::abs(p - 1.0) <= tol.eps_spec * d) {
        order = d;
        break;
      }
    }
    if (order == 0) {
      os << "eigenvalue " << cl.eigenvalue << " has no order up to " << d_max;
      out.reasons.push_back(os.str());
      out.finite = false;
      continue;
    }
    if (out.finite) out.order = std::lcm(out.order, static_cast<std::int64_t>(order));
  }
  if (!out.finite) out.order = 0;
  return out;
}

NoriReport nori_check(const bq::RepZ2& rep, int d_max, const Tolerances& tol) {
  NoriReport a = nori_check(rep.m1, d_max, tol);
  NoriReport b = nori_check(rep.m2, d_max, tol);
  NoriReport out;
  out.finite = a.finite && b.finite;
  out.order = out.finite ? std::lcm(a.order, b.order) : 0;
  for (auto& r : a.reasons) out.reasons.push_back("M1: " + r);
  for (auto& r : b.reasons) out.reasons.push_back("M2: " + r);
  return out;
}

bool is_nori_finite(const CMat& m, int d_max, const Tolerances& tol) { return nori_check(m, d_max, tol).finite; }

bool is_nori_finite(const bq::RepZ2& rep, int d_max, const Tolerances& tol) {
  return nori_check(rep, d_max, tol).finite;
}

}  // namespace eqrh::atheta
