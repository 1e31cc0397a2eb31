#pragma once

// Matrix-valued Laurent polynomials in z, the derivation delta = tau z d/dz,
// the dilation z -> q z, and gauge / shearing transformations.

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "eqrh/numkit.hpp"

namespace eqrh::laurent {

struct Params {
  Complex tau{1.0, -1.0};
  Complex q{1.0, 0.0};

  /// q = exp(2 pi i theta).
  static Params from_theta(Complex tau, double theta);
  bool matches(const Params& other) const;
};

/// Sparse map power -> n x n coefficient.  Zero coefficients are never stored.
class PolyMat {
 public:
  PolyMat(int dim, Params params);

  static PolyMat constant(const CMat& c, Params params);
  static PolyMat monomial(const CMat& c, int power, Params params);
  static PolyMat identity(int dim, Params params);

  int dim() const noexcept { return dim_; }
  const Params& params() const noexcept { return params_; }
  const std::map<int, CMat>& terms() const noexcept { return terms_; }

  CMat coeff(int power) const;
  void set(int power, CMat c);
  void add_to(int power, const CMat& c);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Lowest / highest stored power; nullopt for the zero polynomial.
  std::optional<int> lowest_power() const;
  std::optional<int> highest_power() const;

  PolyMat truncated(int max_power) const;
  /// Drops coefficients with Frobenius norm <= threshold.
  PolyMat pruned(double threshold) const;
  /// sqrt of the sum of squared coefficient Frobenius norms.
  double norm() const;
  PolyMat scaled(Complex s) const;

  friend PolyMat operator+(const PolyMat& f, const PolyMat& g);
  friend PolyMat operator-(const PolyMat& f, const PolyMat& g);
  friend PolyMat operator*(const PolyMat& f, const PolyMat& g);

 private:
  int dim_;
  Params params_;
  std::map<int, CMat> terms_;
};

void require_compatible(const PolyMat& f, const PolyMat& g);

/// Cauchy product keeping only powers <= max_power.
PolyMat mul_truncated(const PolyMat& f, const PolyMat& g, int max_power);

/// tau k F_k z^k.
PolyMat delta_apply(const PolyMat& f);
/// q^k F_k z^k.
PolyMat q_dilate(const PolyMat& f);

struct Truncated {
  PolyMat value;
  double first_discarded_norm = 0.0;
  bool exact = false;
};

/// G on powers 0..k with F G = I + O(z^{k+1}).
PolyMat truncated_inverse(const PolyMat& f, int k);

/// Exact inverse when every row and column of F holds a single monomial.
std::optional<PolyMat> monomial_inverse(const PolyMat& f);

/// P^{-1} A P + P^{-1} delta(P).  Exact for monomial gauges, otherwise the
/// result is truncated to powers <= k.
Truncated gauge_transform(const PolyMat& a, const PolyMat& p, int k);

/// P^{-1} B P(q z), the matching change of the equivariance matrix.
Truncated twist_equivariance(const PolyMat& b, const PolyMat& p, int k);

/// Gauge by a constant similarity S followed by diag(z^{e_1}, ..., z^{e_n}).
struct ShearRecord {
  CMat similarity;
  CMat inverse;
  std::vector<int> exponents;
};

struct GaugeRecord {
  std::vector<ShearRecord> shears;
  PolyMat series;
  int truncation = 1;
};

struct ShearResult {
  PolyMat a;
  ShearRecord record;
  double snapped = 0.0;  // largest constant off-cluster entry set to zero
};

/// Each cluster j of `sd` moves by cluster_shifts[j] * tau.  Throws
/// RegularityViolation if a negative power survives.
ShearResult shear(const PolyMat& a, const numkit::SpectralData& sd, std::span<const int> cluster_shifts,
                  const Tolerances& tol = {});

/// The equivariance matrix under the same gauge.
PolyMat shear_equivariance(const PolyMat& b, const ShearRecord& rec);

/// Undo shear(): gauge by diag(z^{-e}) then by S^{-1}.
PolyMat unshear(const PolyMat& a, const ShearRecord& rec);
PolyMat unshear_equivariance(const PolyMat& b, const ShearRecord& rec);

/// The gauge matrix S diag(z^{e}) of a shear.
PolyMat shear_gauge(const ShearRecord& rec, Params params);

}  // namespace eqrh::laurent
