#include "eqrh/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "schur.hpp"

namespace eqrh {

void Tolerances::validate() const {
  if (!(eps_spec > 0.0) || !(eps_res > 0.0) || !(eps_key > 0.0))
    fail(ErrorKind::InvalidArgument, "tolerances must be strictly positive");
  if (!(eps_spec < 1e-2)) fail(ErrorKind::InvalidArgument, "eps_spec must be below 1e-2");
}

}  // namespace eqrh

namespace eqrh::numkit {

using detail::require_finite;
using detail::require_square;

// --- transversals -----------------------------------------------------------

Transversal::Transversal(Complex tau, double offset) : tau_(tau), offset_(offset) {
  if (tau == Complex(0.0) || !std::isfinite(tau.real()) || !std::isfinite(tau.imag()))
    fail(ErrorKind::InvalidArgument, "transversal modulus tau must be a finite nonzero number");
  if (!std::isfinite(offset)) fail(ErrorKind::InvalidArgument, "transversal offset must be finite");
}

bool Transversal::contains(Complex z) const {
  const double s = coordinate(z);
  return s >= offset_ && s < offset_ + 1.0;
}

double Transversal::margin(Complex z) const {
  const double s = coordinate(z);
  return std::min(s - offset_, offset_ + 1.0 - s);
}

Reduced reduce_mod_transversal(Complex lambda, const Transversal& t) {
  const Complex tau = t.tau();
  auto k = static_cast<std::int64_t>(std::floor(t.coordinate(lambda) - t.offset()));
  Complex rep = lambda - static_cast<double>(k) * tau;
  // Rounding in lambda - k tau can push the coordinate across an edge.
  if (t.coordinate(rep) >= t.offset() + 1.0) {
    rep -= tau;
    ++k;
  } else if (t.coordinate(rep) < t.offset()) {
    rep += tau;
    --k;
  }
  return {rep, k};
}

// --- spectra ----------------------------------------------------------------

bool is_upper_triangular(const CMat& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = j + 1; i < m.rows(); ++i)
      if (m(i, j) != Complex(0.0)) return false;
  return true;
}

double commutator_norm(const CMat& a, const CMat& b) { return (a * b - b * a).norm(); }

CMat SpectralData::projector(std::size_t j) const {
  const int begin = offsets.at(j), size = offsets.at(j + 1) - begin;
  return similarity.middleCols(begin, size) * inverse.middleRows(begin, size);
}

SpectralData spectral(const CMat& m, const Tolerances& tol) {
  auto os = detail::ordered_schur(m, tol);
  const int n = static_cast<int>(m.rows());

  SpectralData out;
  out.offsets = os.offsets;
  CMat t = os.t;
  CMat s = os.q;
  CMat sinv = os.q.adjoint();
  // Peel off one cluster at a time: [[T11, T12], [0, T22]] -> diag(T11, T22).
  for (std::size_t j = 0; j + 1 < os.clusters(); ++j) {
    const int r0 = os.offsets[j], r1 = os.offsets[j + 1];
    const int size = r1 - r0, rest = n - r1;
    const CMat t11 = t.block(r0, r0, size, size);
    const CMat t22 = t.block(r1, r1, rest, rest);
    const CMat x = detail::solve_triangular_sylvester(t11, t22, -t.block(r0, r1, size, rest), 0.0);
    t.block(r0, r1, size, rest).setZero();
    s.middleCols(r1, rest) += s.middleCols(r0, size) * x;
    sinv.middleRows(r0, size) -= x * sinv.middleRows(r1, rest);
  }

  for (std::size_t j = 0; j < os.clusters(); ++j) {
    SpectralCluster c;
    c.eigenvalue = os.centers[j];
    c.multiplicity = os.block_size(j);
    c.basis = s.middleCols(os.offsets[j], c.multiplicity);
    out.clusters.push_back(std::move(c));
  }
  out.residual = (m * s - s * t).norm() / std::max(1.0, m.norm());
  out.similarity = std::move(s);
  out.inverse = std::move(sinv);
  out.block_form = std::move(t);
  return out;
}

CMat solve_sylvester(const CMat& a, const CMat& b, const CMat& c, const Tolerances& tol) {
  require_square(a, "Sylvester coefficient A");
  require_square(b, "Sylvester coefficient B");
  if (c.rows() != a.rows() || c.cols() != b.rows()) {
    std::ostringstream os;
    os << "right-hand side is " << c.rows() << "x" << c.cols() << ", expected " << a.rows() << "x"
       << b.rows();
    fail(ErrorKind::DimensionMismatch, os.str());
  }
  require_finite(a, "A");
  require_finite(b, "B");
  require_finite(c, "C");
  if (a.size() == 0 || b.size() == 0) return CMat::Zero(a.rows(), b.rows());

  const auto sa = detail::ordered_schur(a, tol);
  const auto sb = detail::ordered_schur(b, tol);
  std::vector<Complex> all;
  for (Eigen::Index i = 0; i < sa.t.rows(); ++i) all.push_back(sa.t(i, i));
  for (Eigen::Index i = 0; i < sb.t.rows(); ++i) all.push_back(sb.t(i, i));
  const double radius = tol.eps_spec * detail::cluster_scale(all);
  for (Eigen::Index i = 0; i < sa.t.rows(); ++i)
    for (Eigen::Index j = 0; j < sb.t.rows(); ++j)
      if (std::abs(sa.t(i, i) - sb.t(j, j)) <= radius) {
        std::ostringstream os;
        os << "spectra of A and B overlap: " << sa.t(i, i) << " vs " << sb.t(j, j);
        fail(ErrorKind::SpectrumCollision, os.str());
      }

  const CMat f = sa.q.adjoint() * c * sb.q;
  const CMat y = detail::solve_triangular_sylvester(sa.t, sb.t, f, 0.0);
  return sa.q * y * sb.q.adjoint();
}

CMat mat_exp(const CMat& m) {
  require_square(m, "exponent");
  require_finite(m, "exponent");
  if (m.size() == 0) return m;
  return m.exp();
}

// --- branch-selected logarithm ------------------------------------------------

namespace {

// log of an upper-triangular block whose eigenvalues all sit near `center`,
// using the branch log(center) + 2 pi i * branch and the Mercator series in
// E = T / center - I (E is nilpotent up to the cluster spread).
CMat log_cluster_block(const CMat& t, Complex center, std::int64_t branch) {
  const Eigen::Index n = t.rows();
  const Complex base = std::log(center) + kTwoPiI * static_cast<double>(branch);
  CMat result = base * CMat::Identity(n, n);
  if (n == 1) {
    result(0, 0) += std::log(t(0, 0) / center);
    return result;
  }
  const CMat e = t / center - CMat::Identity(n, n);
  CMat power = e;
  const int max_terms = static_cast<int>(n) + 60;
  for (int k = 1; k <= max_terms; ++k) {
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    const CMat term = (sign / k) * power;
    result += term;
    if (k >= n && term.norm() <= 1e-18 * std::max(1.0, result.norm())) break;
    power = power * e;
  }
  return result;
}

void record_spectrum(const std::vector<Complex>& eigenvalues, const Transversal& t, double eps,
                     FunctionDiagnostics& diag) {
  for (const auto& ev : eigenvalues) {
    const double margin = t.margin(ev);
    diag.boundary_margin = std::min(diag.boundary_margin, margin);
    if (margin < eps) {
      diag.near_boundary = true;
      std::ostringstream os;
      os << "eigenvalue " << ev << " lies within " << eps << " of the transversal edge";
      diag.warnings.push_back(os.str());
    }
  }
}

}  // namespace

TransversalLog log_transversal(const CMat& m, const Transversal& t, const Tolerances& tol) {
  require_square(m, "matrix");
  require_finite(m, "matrix");
  const Eigen::Index n = m.rows();
  TransversalLog out;
  if (n == 0) {
    out.log = m;
    return out;
  }

  const Eigen::JacobiSVD<CMat> svd(m);
  const auto& sv = svd.singularValues();
  if (sv(n - 1) <= tol.eps_res * sv(0)) {
    std::ostringstream os;
    os << "matrix is singular: smallest singular value " << sv(n - 1) << " vs norm " << sv(0);
    fail(ErrorKind::SingularMatrix, os.str());
  }

  const auto os = detail::ordered_schur(m, tol);
  const Complex scale = t.tau() / kTwoPiI;
  const std::size_t p = os.clusters();
  std::vector<CMat> diag_blocks(p);
  std::vector<Complex> log_eigs;

  for (std::size_t j = 0; j < p; ++j) {
    const int r0 = os.offsets[j], size = os.block_size(j);
    const Complex center = os.centers[j];
    const auto red = reduce_mod_transversal(scale * std::log(center), t);
    const std::int64_t branch = -red.shift;
    for (int i = r0; i < r0 + size; ++i) {
      const auto member = reduce_mod_transversal(scale * std::log(os.t(i, i)), t);
      if (member.shift != red.shift) {
        const double sep = std::abs(os.t(i, i) - center);
        std::ostringstream msg;
        msg << "eigenvalue " << os.t(i, i) << " clustered with " << center
            << " reduces to a different branch (separation " << sep << ")";
        out.diagnostics.warnings.push_back(msg.str());
        out.diagnostics.condition_estimate =
            std::max(out.diagnostics.condition_estimate, sep > 0.0 ? 1.0 / sep : 1e300);
      }
    }
    diag_blocks[j] = scale * log_cluster_block(os.t.block(r0, r0, size, size), center, branch);
  }

  CMat f = CMat::Zero(n, n);
  for (std::size_t j = 0; j < p; ++j)
    f.block(os.offsets[j], os.offsets[j], os.block_size(j), os.block_size(j)) = diag_blocks[j];

  // Block Parlett: T_ii F_ij - F_ij T_jj = F_ii T_ij - T_ij F_jj + sum_k (F_ik T_kj - T_ik F_kj).
  for (std::size_t d = 1; d < p; ++d) {
    for (std::size_t i = 0; i + d < p; ++i) {
      const std::size_t j = i + d;
      const int ri = os.offsets[i], si = os.block_size(i);
      const int rj = os.offsets[j], sj = os.block_size(j);
      CMat rhs = f.block(ri, ri, si, si) * os.t.block(ri, rj, si, sj) -
                 os.t.block(ri, rj, si, sj) * f.block(rj, rj, sj, sj);
      for (std::size_t k = i + 1; k < j; ++k) {
        const int rk = os.offsets[k], sk = os.block_size(k);
        rhs += f.block(ri, rk, si, sk) * os.t.block(rk, rj, sk, sj) -
               os.t.block(ri, rk, si, sk) * f.block(rk, rj, sk, sj);
      }
      const double sep = std::abs(os.centers[i] - os.centers[j]);
      out.diagnostics.condition_estimate =
          std::max(out.diagnostics.condition_estimate, std::abs(os.centers[i]) / sep);
      f.block(ri, rj, si, sj) = detail::solve_triangular_sylvester(
          os.t.block(ri, ri, si, si), os.t.block(rj, rj, sj, sj), rhs, 0.0);
    }
  }

  for (Eigen::Index i = 0; i < n; ++i) log_eigs.push_back(f(i, i));
  record_spectrum(log_eigs, t, tol.eps_spec, out.diagnostics);
  out.log = os.q * f * os.q.adjoint();
  return out;
}

namespace {

// Values a hair below the right edge belong to the left edge of the next strip.
Reduced snapped_reduction(Complex lambda, const Transversal& t, double eps) {
  Reduced r = reduce_mod_transversal(lambda, t);
  if (t.coordinate(r.representative) > t.offset() + 1.0 - eps) {
    r.representative -= t.tau();
    ++r.shift;
  }
  return r;
}

}  // namespace

TransversalReduction reduce_to_transversal(const CMat& a, const Transversal& t, const Tolerances& tol) {
  const auto sd = spectral(a, tol);
  TransversalReduction out;
  out.reduced = a;
  std::vector<Complex> eigs;
  for (std::size_t j = 0; j < sd.clusters.size(); ++j) {
    const auto& cl = sd.clusters[j];
    const auto red = snapped_reduction(cl.eigenvalue, t, tol.eps_spec);
    out.shifts.push_back({j, cl.eigenvalue, red.shift});
    const int r0 = sd.offsets[j];
    for (int i = r0; i < r0 + cl.multiplicity; ++i) {
      const Complex member = sd.block_form(i, i);
      if (snapped_reduction(member, t, tol.eps_spec).shift != red.shift) {
        std::ostringstream msg;
        msg << "eigenvalue " << member << " clustered with " << cl.eigenvalue
            << " reduces with a different shift";
        out.diagnostics.warnings.push_back(msg.str());
      }
      eigs.push_back(member - static_cast<double>(red.shift) * t.tau());
    }
    if (red.shift != 0) out.reduced -= (static_cast<double>(red.shift) * t.tau()) * sd.projector(j);
  }
  record_spectrum(eigs, t, tol.eps_spec, out.diagnostics);
  return out;
}

CMat nullspace(const CMat& m, const Tolerances& tol, double floor) {
  const Eigen::Index cols = m.cols();
  if (cols == 0) return CMat(0, 0);
  if (m.rows() == 0) return CMat::Identity(cols, cols);
  require_finite(m, "matrix");

  Eigen::VectorXd sv;
  CMat v;
  if (m.rows() * cols > 400) {
    Eigen::BDCSVD<CMat> svd(m, Eigen::ComputeFullV);
    sv = svd.singularValues();
    v = svd.matrixV();
  } else {
    Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullV);
    sv = svd.singularValues();
    v = svd.matrixV();
  }
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  const double threshold = tol.eps_res * std::max(floor, top);
  Eigen::Index rank = 0;
  if (top > 0.0)
    while (rank < sv.size() && sv(rank) > threshold) ++rank;
  return v.rightCols(cols - rank);
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// --- modular utilities --------------------------------------------------------

SL2Z::SL2Z(std::int64_t a_, std::int64_t b_, std::int64_t c_, std::int64_t d_)
    : a(a_), b(b_), c(c_), d(d_) {
  if (a * d - b * c != 1) {
    std::ostringstream os;
    os << "matrix (" << a << "," << b << ";" << c << "," << d << ") has determinant " << a * d - b * c;
    fail(ErrorKind::InvalidArgument, os.str());
  }
}

SL2Z operator*(const SL2Z& x, const SL2Z& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Complex moebius(const SL2Z& g, Complex tau) {
  const Complex den = static_cast<double>(g.c) * tau + static_cast<double>(g.d);
  if (den == Complex(0.0)) fail(ErrorKind::Pole, "c tau + d vanishes");
  return (static_cast<double>(g.a) * tau + static_cast<double>(g.b)) / den;
}

double wd(Complex tau) {
  if (tau == Complex(0.0)) fail(ErrorKind::InvalidArgument, "wd is undefined at tau = 0");
  if (tau.real() == 0.0) return std::numeric_limits<double>::infinity();
  return std::norm(tau) / std::abs(tau.real());
}

SmallWidth find_small_width(Complex tau) {
  if (tau.imag() == 0.0) fail(ErrorKind::InvalidArgument, "tau must not be real");
  // Smallest N >= 1 with Re(tau) + N > 1.
  std::int64_t n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(1.0 - tau.real())) + 1);
  while (tau.real() + static_cast<double>(n) <= 1.0) ++n;
  while (n > 1 && tau.real() + static_cast<double>(n - 1) > 1.0) --n;

  SmallWidth out;
  out.translation = n;
  out.g = SL2Z::inversion() * SL2Z::translation(n);
  out.gtau = moebius(out.g, tau);
  out.width = wd(out.gtau);
  return out;
}

}  // namespace eqrh::numkit
