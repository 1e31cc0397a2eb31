#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "bq_internal.hpp"
#include "eqrh/bqtau.hpp"

namespace eqrh::bq {

namespace {

NormalForm with_warnings(NormalForm nf, std::vector<std::string> warnings) {
  for (auto& w : warnings) nf.diagnostics.warnings.push_back(std::move(w));
  return nf;
}

CMat vec_identity(int n) {
  CMat v = CMat::Zero(static_cast<Eigen::Index>(n) * n, 1);
  for (int i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i) * n + i, 0) = 1.0;
  return v;
}

// Column-major vec of phi with phi X - Y phi = 0 stacked over constraints.
CMat intertwiner_system(const CMat& ax, const CMat& ay, const CMat& bx, const CMat& by, Complex shift,
                        Complex bscale) {
  const Eigen::Index nx = ax.rows(), ny = ay.rows();
  const CMat ix = CMat::Identity(nx, nx), iy = CMat::Identity(ny, ny);
  const CMat shifted = ay + shift * iy;
  const double sa = std::max(1.0, ax.norm() + shifted.norm());
  const double sb = std::max(1.0, bx.norm() + by.norm());
  CMat m(2 * nx * ny, nx * ny);
  m.topRows(nx * ny) = (numkit::kron(ax.transpose(), iy) - numkit::kron(ix, shifted)) / sa;
  m.bottomRows(nx * ny) = (numkit::kron(bx.transpose(), iy) - bscale * numkit::kron(ix, by)) / sb;
  return m;
}

}  // namespace

void require_same_category(const NormalForm& x, const NormalForm& y) {
  if (std::abs(x.tau() - y.tau()) > 1e-12 * std::max(1.0, std::abs(x.tau())) ||
      std::abs(x.theta - y.theta) > 1e-15) {
    std::ostringstream os;
    os << "objects live over different (tau, theta): (" << x.tau() << ", " << x.theta << ") vs (" << y.tau()
       << ", " << y.theta << ")";
    fail(ErrorKind::ParameterMismatch, os.str());
  }
  if (x.transversal.offset() != y.transversal.offset()) {
    std::ostringstream os;
    os << "objects are normalized to different transversals (offsets " << x.transversal.offset() << " and "
       << y.transversal.offset() << ")";
    fail(ErrorKind::TransversalMismatch, os.str());
  }
}

NormalForm unit_object(const Transversal& t, double theta) {
  CMat a(1, 1), b(1, 1);
  a(0, 0) = numkit::reduce_mod_transversal(Complex(0.0), t).representative;
  b(0, 0) = 1.0;
  return make_normal_form(std::move(a), std::move(b), t, theta);
}

NormalForm direct_sum(const NormalForm& x, const NormalForm& y, const Tolerances& tol) {
  require_same_category(x, y);
  const int n = x.dim() + y.dim();
  CMat a = CMat::Zero(n, n), b = CMat::Zero(n, n);
  a.topLeftCorner(x.dim(), x.dim()) = x.a0;
  a.bottomRightCorner(y.dim(), y.dim()) = y.a0;
  b.topLeftCorner(x.dim(), x.dim()) = x.b0;
  b.bottomRightCorner(y.dim(), y.dim()) = y.b0;
  return make_normal_form(std::move(a), std::move(b), x.transversal, x.theta, tol);
}

NormalForm tensor(const NormalForm& x, const NormalForm& y, const Tolerances& tol) {
  require_same_category(x, y);
  const CMat ix = CMat::Identity(x.dim(), x.dim()), iy = CMat::Identity(y.dim(), y.dim());
  auto red = numkit::reduce_to_transversal(numkit::kron(x.a0, iy) + numkit::kron(ix, y.a0), x.transversal, tol);
  auto nf = make_normal_form(std::move(red.reduced), numkit::kron(x.b0, y.b0), x.transversal, x.theta, tol);
  return with_warnings(std::move(nf), std::move(red.diagnostics.warnings));
}

NormalForm dual(const NormalForm& x, const Tolerances& tol) {
  auto red = numkit::reduce_to_transversal(-x.a0.transpose(), x.transversal, tol);
  CMat b = x.dim() == 0 ? CMat(0, 0) : CMat(x.b0.transpose().fullPivLu().inverse());
  auto nf = make_normal_form(std::move(red.reduced), std::move(b), x.transversal, x.theta, tol);
  return with_warnings(std::move(nf), std::move(red.diagnostics.warnings));
}

Rigidity rigidity(const NormalForm& x, const Tolerances& tol) {
  const int n = x.dim();
  const CMat id = CMat::Identity(n, n);
  Rigidity r;
  r.coevaluation = vec_identity(n);
  r.evaluation = r.coevaluation.transpose();
  r.triangle_left =
      (numkit::kron(r.evaluation, id) * numkit::kron(id, r.coevaluation) - id).norm();
  r.triangle_right =
      (numkit::kron(id, r.evaluation) * numkit::kron(r.coevaluation, id) - id).norm();

  const NormalForm xd = dual(x, tol);
  const NormalForm unit = unit_object(x.transversal, x.theta);
  r.evaluation_residual = intertwining_residual(r.evaluation, tensor(x, xd, tol), unit);
  r.coevaluation_residual = intertwining_residual(r.coevaluation, unit, tensor(xd, x, tol));
  return r;
}

// --- Hom ------------------------------------------------------------------------------

std::vector<Morphism> hom_basis(const NormalForm& x, const NormalForm& y, const Tolerances& tol) {
  require_same_category(x, y);
  std::vector<Morphism> out;
  if (x.dim() == 0 || y.dim() == 0) return out;
  const CMat sys = intertwiner_system(x.a0, y.a0, x.b0, y.b0, Complex(0.0), Complex(1.0));
  const CMat ns = numkit::nullspace(sys, tol, 1.0);
  for (Eigen::Index c = 0; c < ns.cols(); ++c) {
    const CMat phi = Eigen::Map<const CMat>(ns.col(c).data(), y.dim(), x.dim());
    out.push_back({x, y, phi});
  }
  return out;
}

ModeScan hom_mode_scan(const NormalForm& x, const NormalForm& y, int k_scan, const Tolerances& tol) {
  require_same_category(x, y);
  ModeScan scan;
  scan.k_scan = k_scan;
  if (x.dim() == 0 || y.dim() == 0) return scan;
  const Complex q = x.params().q;
  for (int k = -k_scan; k <= k_scan; ++k) {
    if (k == 0) continue;
    const CMat sys = intertwiner_system(x.a0, y.a0, x.b0, y.b0, x.tau() * static_cast<double>(k), std::pow(q, k));
    const auto d = static_cast<int>(numkit::nullspace(sys, tol, 1.0).cols());
    if (d > 0) scan.nonzero.emplace_back(k, d);
  }
  return scan;
}

std::optional<Morphism> find_isomorphism(const NormalForm& x, const NormalForm& y, std::uint64_t seed, int trials,
                                         const Tolerances& tol) {
  if (x.dim() != y.dim()) return std::nullopt;
  const auto forward = hom_basis(x, y, tol);
  const auto backward = hom_basis(y, x, tol);
  if (forward.empty() || forward.size() != backward.size()) return std::nullopt;
  if (x.dim() == 0) return Morphism{x, y, CMat(0, 0)};

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int t = 0; t < trials; ++t) {
    CMat phi = CMat::Zero(y.dim(), x.dim());
    for (const auto& m : forward) phi += Complex(normal(rng), normal(rng)) * m.phi;
    Eigen::JacobiSVD<CMat> svd(phi);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) > tol.eps_res * sv(0)) return Morphism{x, y, phi};
  }
  return std::nullopt;
}

// --- kernels and cokernels ----------------------------------------------------------------

namespace {

void require_morphism(const Morphism& m, const Tolerances& tol) {
  require_same_category(m.source, m.target);
  const double r = intertwining_residual(m.phi, m.source, m.target);
  const double scale = std::max(1.0, m.phi.norm()) *
                       (1.0 + m.source.a0.norm() + m.target.a0.norm() + m.source.b0.norm() + m.target.b0.norm());
  if (r > std::sqrt(tol.eps_res) * scale) {
    std::ostringstream os;
    os << "matrix does not intertwine source and target (residual " << r << ")";
    fail(ErrorKind::InvalidArgument, os.str());
  }
}

}  // namespace

SubQuotient kernel(const Morphism& m, const Tolerances& tol) {
  require_morphism(m, tol);
  const CMat n = m.phi.rows() == 0 ? CMat(CMat::Identity(m.source.dim(), m.source.dim()))
                                   : numkit::nullspace(m.phi, tol);
  auto obj = make_normal_form(n.adjoint() * m.source.a0 * n, n.adjoint() * m.source.b0 * n, m.source.transversal,
                              m.source.theta, tol);
  Morphism inclusion{obj, m.source, n};
  return {std::move(obj), std::move(inclusion)};
}

SubQuotient cokernel(const Morphism& m, const Tolerances& tol) {
  require_morphism(m, tol);
  const CMat c = m.phi.cols() == 0 ? CMat(CMat::Identity(m.target.dim(), m.target.dim()))
                                   : numkit::nullspace(m.phi.adjoint(), tol);
  auto obj = make_normal_form(c.adjoint() * m.target.a0 * c, c.adjoint() * m.target.b0 * c, m.target.transversal,
                              m.target.theta, tol);
  Morphism projection{m.target, obj, c.adjoint()};
  return {std::move(obj), std::move(projection)};
}

}  // namespace eqrh::bq
