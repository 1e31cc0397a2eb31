#include "eqrh/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/LU>

namespace eqrh::laurent {

namespace {

bool all_zero(const CMat& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != Complex(0.0)) return false;
  return true;
}

bool close(Complex x, Complex y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x)); }

CMat invert_constant(const CMat& m, const char* what) {
  Eigen::FullPivLU<CMat> lu(m);
  if (!lu.isInvertible()) fail(ErrorKind::SingularMatrix, std::string(what) + " is not invertible");
  return lu.inverse();
}

PolyMat conjugate(const PolyMat& f, const CMat& left, const CMat& right) {
  PolyMat out(f.dim(), f.params());
  for (const auto& [k, c] : f.terms()) out.set(k, left * c * right);
  return out;
}

// D^{-1} A D + D^{-1} delta D with D = diag(z^{e}).
PolyMat diagonal_gauge(const PolyMat& a, const std::vector<int>& e) {
  const int n = a.dim();
  std::map<int, CMat> acc;
  auto slot = [&](int k) -> CMat& {
    auto it = acc.find(k);
    if (it == acc.end()) it = acc.emplace(k, CMat::Zero(n, n)).first;
    return it->second;
  };
  for (const auto& [k, c] : a.terms())
    for (int col = 0; col < n; ++col)
      for (int row = 0; row < n; ++row)
        if (c(row, col) != Complex(0.0)) slot(k + e[col] - e[row])(row, col) += c(row, col);
  const Complex tau = a.params().tau;
  for (int i = 0; i < n; ++i)
    if (e[i] != 0) slot(0)(i, i) += tau * static_cast<double>(e[i]);
  PolyMat out(n, a.params());
  for (auto& [k, c] : acc) out.set(k, std::move(c));
  return out;
}

// D^{-1} B D(q z) with D = diag(z^{e}).
PolyMat diagonal_twist(const PolyMat& b, const std::vector<int>& e) {
  const int n = b.dim();
  const Complex q = b.params().q;
  std::map<int, CMat> acc;
  for (const auto& [k, c] : b.terms())
    for (int col = 0; col < n; ++col) {
      const Complex phase = std::pow(q, e[col]);
      for (int row = 0; row < n; ++row) {
        if (c(row, col) == Complex(0.0)) continue;
        auto it = acc.find(k + e[col] - e[row]);
        if (it == acc.end()) it = acc.emplace(k + e[col] - e[row], CMat::Zero(n, n)).first;
        it->second(row, col) += phase * c(row, col);
      }
    }
  PolyMat out(n, b.params());
  for (auto& [k, c] : acc) out.set(k, std::move(c));
  return out;
}

std::vector<int> negated(const std::vector<int>& e) {
  std::vector<int> out(e.size());
  std::transform(e.begin(), e.end(), out.begin(), [](int x) { return -x; });
  return out;
}

}  // namespace

Params Params::from_theta(Complex tau, double theta) {
  return {tau, std::exp(kTwoPiI * theta)};
}

bool Params::matches(const Params& other) const { return close(tau, other.tau) && close(q, other.q); }

// --- PolyMat ----------------------------------------------------------------

PolyMat::PolyMat(int dim, Params params) : dim_(dim), params_(params) {
  if (dim < 0) fail(ErrorKind::InvalidArgument, "dimension must be nonnegative");
  if (params.tau == Complex(0.0)) fail(ErrorKind::InvalidArgument, "tau must be nonzero");
  if (std::abs(std::abs(params.q) - 1.0) > 1e-12)
    fail(ErrorKind::InvalidArgument, "q must lie on the unit circle");
}

PolyMat PolyMat::constant(const CMat& c, Params params) { return monomial(c, 0, params); }

PolyMat PolyMat::monomial(const CMat& c, int power, Params params) {
  if (c.rows() != c.cols()) fail(ErrorKind::NonSquare, "coefficient must be square");
  PolyMat out(static_cast<int>(c.rows()), params);
  out.set(power, c);
  return out;
}

PolyMat PolyMat::identity(int dim, Params params) {
  return constant(CMat::Identity(dim, dim), params);
}

CMat PolyMat::coeff(int power) const {
  auto it = terms_.find(power);
  return it == terms_.end() ? CMat::Zero(dim_, dim_) : it->second;
}

void PolyMat::set(int power, CMat c) {
  if (c.rows() != dim_ || c.cols() != dim_) {
    std::ostringstream os;
    os << "coefficient at power " << power << " is " << c.rows() << "x" << c.cols() << ", expected "
       << dim_ << "x" << dim_;
    fail(ErrorKind::DimensionMismatch, os.str());
  }
  if (!c.allFinite()) fail(ErrorKind::InvalidArgument, "coefficient has non-finite entries");
  if (all_zero(c))
    terms_.erase(power);
  else
    terms_[power] = std::move(c);
}

void PolyMat::add_to(int power, const CMat& c) {
  auto it = terms_.find(power);
  if (it == terms_.end()) {
    set(power, c);
    return;
  }
  it->second += c;
  if (all_zero(it->second)) terms_.erase(it);
}

bool PolyMat::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.count(0) == 1); }

std::optional<int> PolyMat::lowest_power() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.begin()->first;
}

std::optional<int> PolyMat::highest_power() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.rbegin()->first;
}

PolyMat PolyMat::truncated(int max_power) const {
  PolyMat out(dim_, params_);
  for (const auto& [k, c] : terms_)
    if (k <= max_power) out.terms_.emplace(k, c);
  return out;
}

PolyMat PolyMat::pruned(double threshold) const {
  PolyMat out(dim_, params_);
  for (const auto& [k, c] : terms_)
    if (c.norm() > threshold) out.terms_.emplace(k, c);
  return out;
}

double PolyMat::norm() const {
  double s = 0.0;
  for (const auto& [k, c] : terms_) s += c.squaredNorm();
  return std::sqrt(s);
}

PolyMat PolyMat::scaled(Complex s) const {
  PolyMat out(dim_, params_);
  if (s == Complex(0.0)) return out;
  for (const auto& [k, c] : terms_) out.set(k, s * c);
  return out;
}

void require_compatible(const PolyMat& f, const PolyMat& g) {
  if (f.dim() != g.dim()) {
    std::ostringstream os;
    os << "dimensions differ: " << f.dim() << " vs " << g.dim();
    fail(ErrorKind::DimensionMismatch, os.str());
  }
  if (!f.params().matches(g.params())) fail(ErrorKind::ParameterMismatch, "tau or q differ");
}

PolyMat operator+(const PolyMat& f, const PolyMat& g) {
  require_compatible(f, g);
  PolyMat out = f;
  for (const auto& [k, c] : g.terms()) out.add_to(k, c);
  return out;
}

PolyMat operator-(const PolyMat& f, const PolyMat& g) {
  require_compatible(f, g);
  PolyMat out = f;
  for (const auto& [k, c] : g.terms()) out.add_to(k, -c);
  return out;
}

PolyMat operator*(const PolyMat& f, const PolyMat& g) {
  const auto hf = f.highest_power(), hg = g.highest_power();
  return mul_truncated(f, g, hf && hg ? *hf + *hg : 0);
}

PolyMat mul_truncated(const PolyMat& f, const PolyMat& g, int max_power) {
  require_compatible(f, g);
  std::map<int, CMat> acc;
  for (const auto& [i, fi] : f.terms())
    for (const auto& [j, gj] : g.terms()) {
      if (i + j > max_power) break;
      auto it = acc.find(i + j);
      if (it == acc.end())
        acc.emplace(i + j, fi * gj);
      else
        it->second += fi * gj;
    }
  PolyMat out(f.dim(), f.params());
  for (auto& [k, c] : acc) out.set(k, std::move(c));
  return out;
}

PolyMat delta_apply(const PolyMat& f) {
  PolyMat out(f.dim(), f.params());
  const Complex tau = f.params().tau;
  for (const auto& [k, c] : f.terms())
    if (k != 0) out.set(k, (tau * static_cast<double>(k)) * c);
  return out;
}

PolyMat q_dilate(const PolyMat& f) {
  PolyMat out(f.dim(), f.params());
  const Complex q = f.params().q;
  for (const auto& [k, c] : f.terms()) out.set(k, std::pow(q, k) * c);
  return out;
}

// --- inverses and gauges ------------------------------------------------------

PolyMat truncated_inverse(const PolyMat& f, int k) {
  if (k < 0) fail(ErrorKind::InvalidArgument, "truncation order must be nonnegative");
  const auto low = f.lowest_power();
  if (!low || *low != 0) fail(ErrorKind::InvalidArgument, "series inverse needs a lowest term at power 0");
  const int n = f.dim();
  const CMat f0inv = invert_constant(f.coeff(0), "constant term");
  std::vector<CMat> g(k + 1);
  g[0] = f0inv;
  for (int j = 1; j <= k; ++j) {
    CMat acc = CMat::Zero(n, n);
    for (const auto& [i, fi] : f.terms()) {
      if (i == 0) continue;
      if (i > j) break;
      acc += fi * g[j - i];
    }
    g[j] = -f0inv * acc;
  }
  PolyMat out(n, f.params());
  for (int j = 0; j <= k; ++j) out.set(j, std::move(g[j]));
  return out;
}

std::optional<PolyMat> monomial_inverse(const PolyMat& f) {
  const int n = f.dim();
  std::vector<int> row_hits(n, 0), col_hits(n, 0);
  PolyMat inv(n, f.params());
  for (const auto& [k, c] : f.terms())
    for (int col = 0; col < n; ++col)
      for (int row = 0; row < n; ++row) {
        if (c(row, col) == Complex(0.0)) continue;
        if (++row_hits[row] > 1 || ++col_hits[col] > 1) return std::nullopt;
        CMat e = CMat::Zero(n, n);
        e(col, row) = 1.0 / c(row, col);
        inv.add_to(-k, e);
      }
  for (int i = 0; i < n; ++i)
    if (row_hits[i] != 1 || col_hits[i] != 1) return std::nullopt;
  return inv;
}

namespace {

// P^{-1} X R + P^{-1} extra, evaluated exactly or to order k.
Truncated apply_gauge(const PolyMat& x, const PolyMat& p, const PolyMat& right, const PolyMat* extra, int k) {
  require_compatible(x, p);
  if (p.is_zero()) fail(ErrorKind::SingularMatrix, "gauge is zero");
  if (auto pinv = monomial_inverse(p)) {
    PolyMat value = (*pinv) * x * right;
    if (extra) value = value + (*pinv) * (*extra);
    return {std::move(value), 0.0, true};
  }
  if (p.is_constant()) {
    const CMat inv = invert_constant(p.coeff(0), "gauge");
    PolyMat value = conjugate(x, inv, p.coeff(0));
    return {std::move(value), 0.0, true};
  }
  if (*p.lowest_power() < 0)
    fail(ErrorKind::InvalidArgument, "series gauge must have no negative powers");
  const int low = x.lowest_power().value_or(0);
  const int order = k + 1 + std::max(0, -low);
  const PolyMat pinv = truncated_inverse(p, order);
  PolyMat value = mul_truncated(mul_truncated(pinv, x, order), right, k + 1);
  if (extra) value = value + mul_truncated(pinv, *extra, k + 1);
  const double discarded = value.coeff(k + 1).norm();
  return {value.truncated(k), discarded, false};
}

}  // namespace

Truncated gauge_transform(const PolyMat& a, const PolyMat& p, int k) {
  const PolyMat dp = delta_apply(p);
  return apply_gauge(a, p, p, &dp, k);
}

Truncated twist_equivariance(const PolyMat& b, const PolyMat& p, int k) {
  return apply_gauge(b, p, q_dilate(p), nullptr, k);
}

// --- shears -------------------------------------------------------------------

ShearResult shear(const PolyMat& a, const numkit::SpectralData& sd, std::span<const int> cluster_shifts,
                  const Tolerances& tol) {
  const int n = a.dim();
  if (static_cast<int>(sd.dim()) != n) fail(ErrorKind::DimensionMismatch, "spectral data has wrong size");
  if (cluster_shifts.size() != sd.clusters.size()) {
    std::ostringstream os;
    os << "expected " << sd.clusters.size() << " cluster shifts, got " << cluster_shifts.size();
    fail(ErrorKind::DimensionMismatch, os.str());
  }

  ShearResult out{a, {CMat::Identity(n, n), CMat::Identity(n, n), std::vector<int>(n, 0)}, 0.0};
  if (std::all_of(cluster_shifts.begin(), cluster_shifts.end(), [](int s) { return s == 0; })) return out;

  std::vector<int> cluster_of(n);
  for (std::size_t j = 0; j < sd.clusters.size(); ++j)
    for (int i = sd.offsets[j]; i < sd.offsets[j + 1]; ++i) {
      cluster_of[i] = static_cast<int>(j);
      out.record.exponents[i] = cluster_shifts[j];
    }
  out.record.similarity = sd.similarity;
  out.record.inverse = sd.inverse;

  PolyMat moved = conjugate(a, sd.inverse, sd.similarity);
  const double scale = std::max(1.0, a.norm());
  CMat c0 = moved.coeff(0);
  for (int col = 0; col < n; ++col)
    for (int row = 0; row < n; ++row)
      if (cluster_of[row] != cluster_of[col]) {
        out.snapped = std::max(out.snapped, std::abs(c0(row, col)));
        c0(row, col) = 0.0;
      }
  if (out.snapped > std::sqrt(tol.eps_res) * scale) {
    std::ostringstream os;
    os << "constant term couples clusters (" << out.snapped << "); similarity does not decouple it";
    fail(ErrorKind::InvalidArgument, os.str());
  }
  moved.set(0, std::move(c0));

  PolyMat sheared = diagonal_gauge(moved, out.record.exponents);
  PolyMat cleaned(n, a.params());
  for (const auto& [k, c] : sheared.terms()) {
    if (k >= 0) {
      cleaned.set(k, c);
      continue;
    }
    const double size = c.norm();
    if (size > tol.eps_res * scale) {
      std::ostringstream os;
      os << "shear leaves a z^" << k << " term of norm " << size;
      fail(ErrorKind::RegularityViolation, os.str());
    }
    out.snapped = std::max(out.snapped, size);
  }
  out.a = std::move(cleaned);
  return out;
}

PolyMat shear_equivariance(const PolyMat& b, const ShearRecord& rec) {
  return diagonal_twist(conjugate(b, rec.inverse, rec.similarity), rec.exponents);
}

PolyMat unshear(const PolyMat& a, const ShearRecord& rec) {
  return conjugate(diagonal_gauge(a, negated(rec.exponents)), rec.similarity, rec.inverse);
}

PolyMat unshear_equivariance(const PolyMat& b, const ShearRecord& rec) {
  return conjugate(diagonal_twist(b, negated(rec.exponents)), rec.similarity, rec.inverse);
}

PolyMat shear_gauge(const ShearRecord& rec, Params params) {
  const int n = static_cast<int>(rec.exponents.size());
  PolyMat out(n, params);
  for (int col = 0; col < n; ++col) {
    CMat c = CMat::Zero(n, n);
    c.col(col) = rec.similarity.col(col);
    out.add_to(rec.exponents[col], c);
  }
  return out;
}

}  // namespace eqrh::laurent
