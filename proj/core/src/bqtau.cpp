#include "eqrh/bqtau.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "bq_internal.hpp"

namespace eqrh::bq {

namespace detail {

double min_singular(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double max_singular(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues()(0);
}

bool invertible(const CMat& m, const Tolerances& tol) {
  if (m.size() == 0) return true;
  Eigen::JacobiSVD<CMat> svd(m);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1) > tol.eps_res * std::max(1.0, sv(0));
}

void record_margins(const CMat& a0, const Transversal& t, const Tolerances& tol, NormalFormDiagnostics& diag,
                    bool strict) {
  if (a0.rows() == 0) return;
  const auto sd = numkit::spectral(a0, tol);
  for (const auto& cl : sd.clusters) {
    const double margin = t.margin(cl.eigenvalue);
    diag.boundary_margin = std::min(diag.boundary_margin, margin);
    if (strict && margin < -tol.eps_spec) {
      std::ostringstream os;
      os << "eigenvalue " << cl.eigenvalue << " lies outside the transversal (offset " << t.offset() << ")";
      fail(ErrorKind::InvalidArgument, os.str());
    }
    if (margin < tol.eps_spec) {
      std::ostringstream os;
      os << "eigenvalue " << cl.eigenvalue << " lies within " << tol.eps_spec << " of the transversal edge";
      diag.warnings.push_back(os.str());
    }
  }
}

}  // namespace detail

BqObject::BqObject(PolyMat a_, PolyMat b_, double theta_, std::optional<double> offset)
    : a(std::move(a_)), b(std::move(b_)), theta(theta_), transversal_offset(offset) {
  laurent::require_compatible(a, b);
  if (!(theta > 0.0 && theta < 1.0)) fail(ErrorKind::InvalidArgument, "theta must lie in (0, 1)");
  if (std::abs(a.params().q - std::exp(kTwoPiI * theta)) > 1e-12)
    fail(ErrorKind::ParameterMismatch, "q does not equal exp(2 pi i theta)");
}

Validation residuals(const BqObject& obj) {
  Validation v;
  for (const auto& [k, c] : obj.a.terms())
    if (k < 0) v.negative_part += c.squaredNorm();
  v.negative_part = std::sqrt(v.negative_part);
  v.b0_min_singular = detail::min_singular(obj.b.coeff(0));
  const PolyMat r = laurent::delta_apply(obj.b) + obj.a * obj.b - obj.b * laurent::q_dilate(obj.a);
  v.equivariance = r.norm();
  v.equivariance_scale = std::max(1.0, obj.a.norm() * obj.b.norm() + laurent::delta_apply(obj.b).norm());
  return v;
}

Validation validate(const BqObject& obj, const Tolerances& tol) {
  tol.validate();
  const Validation v = residuals(obj);
  if (v.negative_part > 0.0) {
    std::ostringstream os;
    os << "A has terms at negative powers (norm " << v.negative_part << ")";
    fail(ErrorKind::RegularityViolation, os.str());
  }
  if (obj.dim() > 0 && !detail::invertible(obj.b.coeff(0), tol)) {
    std::ostringstream os;
    os << "constant term of B is singular (smallest singular value " << v.b0_min_singular << ")";
    fail(ErrorKind::SingularB, os.str());
  }
  if (v.equivariance > tol.eps_res * v.equivariance_scale) {
    std::ostringstream os;
    os << "||delta B + A B - B A(qz)|| = " << v.equivariance << " exceeds " << tol.eps_res << " * "
       << v.equivariance_scale;
    fail(ErrorKind::EquivarianceViolation, os.str());
  }
  return v;
}

NormalForm make_normal_form(CMat a0, CMat b0, const Transversal& t, double theta, const Tolerances& tol) {
  tol.validate();
  if (a0.rows() != a0.cols()) fail(ErrorKind::NonSquare, "A0 must be square");
  if (b0.rows() != b0.cols()) fail(ErrorKind::NonSquare, "B0 must be square");
  if (a0.rows() != b0.rows()) fail(ErrorKind::DimensionMismatch, "A0 and B0 differ in size");
  if (!a0.allFinite() || !b0.allFinite()) fail(ErrorKind::InvalidArgument, "non-finite entries");
  if (!(theta > 0.0 && theta < 1.0)) fail(ErrorKind::InvalidArgument, "theta must lie in (0, 1)");
  if (!detail::invertible(b0, tol)) fail(ErrorKind::SingularB, "B0 is singular");

  const int n = static_cast<int>(a0.rows());
  NormalForm nf{std::move(a0), std::move(b0), t, theta,
                laurent::GaugeRecord{{}, PolyMat::identity(n, Params::from_theta(t.tau(), theta)), 1}, {}};
  nf.diagnostics.commutator = numkit::commutator_norm(nf.a0, nf.b0);
  const double bound = tol.eps_res * (nf.a0.norm() + 1.0) * (nf.b0.norm() + 1.0);
  if (nf.diagnostics.commutator > bound) {
    std::ostringstream os;
    os << "||[A0, B0]|| = " << nf.diagnostics.commutator << " exceeds " << bound;
    fail(ErrorKind::EquivarianceViolation, os.str());
  }
  detail::record_margins(nf.a0, t, tol, nf.diagnostics, true);
  return nf;
}

RepZ2 make_rep(CMat m1, CMat m2, const Tolerances& tol) {
  if (m1.rows() != m1.cols() || m2.rows() != m2.cols()) fail(ErrorKind::NonSquare, "M1 and M2 must be square");
  if (m1.rows() != m2.rows()) fail(ErrorKind::DimensionMismatch, "M1 and M2 differ in size");
  if (!m1.allFinite() || !m2.allFinite()) fail(ErrorKind::InvalidArgument, "non-finite entries");
  if (!detail::invertible(m1, tol)) fail(ErrorKind::SingularMatrix, "M1 is singular");
  if (!detail::invertible(m2, tol)) fail(ErrorKind::SingularMatrix, "M2 is singular");
  const double c = numkit::commutator_norm(m1, m2);
  const double bound = tol.eps_res * std::max(1.0, m1.norm() * m2.norm());
  if (c > bound) {
    std::ostringstream os;
    os << "||[M1, M2]|| = " << c << " exceeds " << bound;
    fail(ErrorKind::EquivarianceViolation, os.str());
  }
  return {std::move(m1), std::move(m2)};
}

double intertwining_residual(const CMat& phi, const NormalForm& src, const NormalForm& tgt) {
  if (phi.rows() != tgt.dim() || phi.cols() != src.dim())
    fail(ErrorKind::DimensionMismatch, "morphism matrix has the wrong shape");
  return (phi * src.a0 - tgt.a0 * phi).norm() + (phi * src.b0 - tgt.b0 * phi).norm();
}

// --- normalization --------------------------------------------------------------

namespace {

numkit::SpectralData single_cluster(int n) {
  numkit::SpectralData sd;
  sd.clusters.push_back({Complex(0.0), n, CMat::Identity(n, n)});
  sd.offsets = {0, n};
  sd.similarity = CMat::Identity(n, n);
  sd.inverse = CMat::Identity(n, n);
  sd.block_form = CMat::Zero(n, n);
  return sd;
}

}  // namespace

NormalForm normalize(const BqObject& obj, const Transversal& t, int truncation, const Tolerances& tol) {
  validate(obj, tol);
  if (truncation < 1) fail(ErrorKind::InvalidArgument, "truncation order must be at least 1");
  if (std::abs(t.tau() - obj.tau()) > 1e-12 * std::max(1.0, std::abs(obj.tau())))
    fail(ErrorKind::ParameterMismatch, "transversal tau differs from the object's tau");

  const int n = obj.dim();
  const Params params = obj.params();
  PolyMat a = obj.a;
  PolyMat b = obj.b;
  NormalFormDiagnostics diag;
  std::vector<laurent::ShearRecord> shears;

  // Shearing: a uniform shift when every cluster agrees, otherwise one step
  // of a single sign.
  const int max_passes = 10000;
  for (int pass = 0; n > 0; ++pass) {
    if (pass == max_passes) fail(ErrorKind::ConvergenceFailure, "shearing did not reach the transversal");
    const auto sd = numkit::spectral(a.coeff(0), tol);
    std::vector<std::int64_t> k(sd.clusters.size());
    for (std::size_t j = 0; j < k.size(); ++j) k[j] = numkit::reduce_mod_transversal(sd.clusters[j].eigenvalue, t).shift;
    if (std::all_of(k.begin(), k.end(), [](std::int64_t s) { return s == 0; })) break;

    laurent::ShearResult sr{a, {}, 0.0};
    if (std::all_of(k.begin(), k.end(), [&](std::int64_t s) { return s == k[0]; })) {
      const int e = static_cast<int>(-k[0]);
      const std::vector<int> shift{e};
      sr = laurent::shear(a, single_cluster(n), shift, tol);
    } else {
      const bool down = std::any_of(k.begin(), k.end(), [](std::int64_t s) { return s > 0; });
      std::vector<int> e(k.size(), 0);
      for (std::size_t j = 0; j < k.size(); ++j) {
        if (down && k[j] > 0) e[j] = -1;
        if (!down && k[j] < 0) e[j] = 1;
      }
      sr = laurent::shear(a, sd, e, tol);
    }
    b = laurent::shear_equivariance(b, sr.record);
    a = std::move(sr.a);
    diag.snapped = std::max(diag.snapped, sr.snapped);
    shears.push_back(std::move(sr.record));
    ++diag.shear_passes;
  }

  // Series gauge: (A0 + tau k) P_k - P_k A0 = -(A_k + sum_{j<k} A_{k-j} P_j).
  const CMat a0 = a.coeff(0);
  const int extra = std::max(0, -b.lowest_power().value_or(0));
  const int order = truncation + 1 + extra;
  PolyMat p = PolyMat::identity(n, params);
  std::vector<CMat> pk(order + 1);
  pk[0] = CMat::Identity(n, n);
  for (int k = 1; k <= order; ++k) {
    CMat rhs = a.coeff(k);
    for (int j = 1; j < k; ++j) {
      auto it = a.terms().find(k - j);
      if (it != a.terms().end()) rhs += it->second * pk[j];
    }
    const CMat shifted = a0 + (obj.tau() * static_cast<double>(k)) * CMat::Identity(n, n);
    pk[k] = numkit::solve_sylvester(shifted, a0, -rhs, tol);
    p.set(k, pk[k]);
  }

  const auto ga = laurent::gauge_transform(a, p, truncation);
  diag.gauge_residual = (ga.value - PolyMat::constant(a0, params)).norm();
  diag.first_discarded = ga.first_discarded_norm;

  const auto gb = laurent::twist_equivariance(b, p, truncation);
  const CMat b0 = gb.value.coeff(0);
  diag.b_residual = (gb.value - PolyMat::constant(b0, params)).norm();
  const double b_bound = tol.eps_res * std::max(1.0, obj.b.norm());
  if (diag.b_residual > b_bound) {
    std::ostringstream os;
    os << "B is not constant after the gauge: residual " << diag.b_residual << " exceeds " << b_bound
       << " at truncation " << truncation;
    fail(ErrorKind::NonConstantB, os.str());
  }
  if (!detail::invertible(b0, tol)) fail(ErrorKind::NonConstantB, "normalized B0 is singular");
  diag.commutator = numkit::commutator_norm(a0, b0);
  const double c_bound = tol.eps_res * (a0.norm() + 1.0) * (b0.norm() + 1.0);
  if (diag.commutator > c_bound) {
    std::ostringstream os;
    os << "normalized ||[A0, B0]|| = " << diag.commutator << " exceeds " << c_bound;
    fail(ErrorKind::NonConstantB, os.str());
  }
  detail::record_margins(a0, t, tol, diag, false);

  NormalForm nf{a0, b0, t, obj.theta, {std::move(shears), p.truncated(truncation), truncation}, std::move(diag)};
  return nf;
}

// --- Riemann-Hilbert ---------------------------------------------------------------

NormalForm functor_F(const RepZ2& rep, const Transversal& t, double theta, const Tolerances& tol) {
  make_rep(rep.m1, rep.m2, tol);
  auto log = numkit::log_transversal(rep.m1, t, tol);
  auto nf = make_normal_form(std::move(log.log), rep.m2, t, theta, tol);
  for (auto& w : log.diagnostics.warnings) nf.diagnostics.warnings.push_back(std::move(w));
  return nf;
}

RepZ2 fiber_omega(const NormalForm& nf) {
  return {numkit::mat_exp((kTwoPiI / nf.tau()) * nf.a0), nf.b0};
}

BqObject to_object(const NormalForm& nf) {
  const Params params = nf.params();
  return BqObject(PolyMat::constant(nf.a0, params), PolyMat::constant(nf.b0, params), nf.theta,
                  nf.transversal.offset());
}

}  // namespace eqrh::bq
