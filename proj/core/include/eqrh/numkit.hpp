#pragma once

// Dense complex matrix numerics and the tau-lattice utilities the rest of the
// library is built on.  Everything here is a pure function of its arguments.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eqrh/errors.hpp"

namespace eqrh {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kTwoPiI{0.0, 2.0 * std::numbers::pi};

/// Numerical thresholds shared by every algorithm.
///
/// eps_spec is the eigenvalue clustering radius, eps_res the residual
/// acceptance level and eps_key the radius used to identify K0 keys and
/// divisor points.  Radii are measured relative to max(1, |value|).
struct Tolerances {
  double eps_spec = 1e-8;
  double eps_res = 1e-9;
  double eps_key = 1e-7;

  void validate() const;
};

}  // namespace eqrh

namespace eqrh::numkit {

/// The strip {z : a <= Re(z/tau) < a + 1}, a section of C -> C/tau Z.
class Transversal {
 public:
  explicit Transversal(Complex tau, double offset = 0.0);

  Complex tau() const noexcept { return tau_; }
  double offset() const noexcept { return offset_; }

  /// Re(z/tau), the coordinate across the strip.
  double coordinate(Complex z) const { return (z / tau_).real(); }
  bool contains(Complex z) const;
  /// Signed distance (in strip coordinates) to the nearer edge; negative
  /// outside the strip.
  double margin(Complex z) const;

  bool operator==(const Transversal& other) const = default;

 private:
  Complex tau_;
  double offset_;
};

struct Reduced {
  Complex representative;
  std::int64_t shift = 0;
};

/// Unique representative of lambda + tau Z inside the strip, with
/// representative = lambda - shift * tau.
Reduced reduce_mod_transversal(Complex lambda, const Transversal& t);

struct SpectralCluster {
  Complex eigenvalue;
  int multiplicity = 0;
  CMat basis;  // columns span the generalized eigenspace
};

/// Spectral decomposition M = similarity * block_form * inverse with
/// block_form block diagonal, one upper-triangular block per cluster.
struct SpectralData {
  std::vector<SpectralCluster> clusters;
  std::vector<int> offsets;  // cluster j occupies [offsets[j], offsets[j+1])
  CMat similarity;
  CMat inverse;
  CMat block_form;
  double residual = 0.0;  // ||M S - S D||_F / max(1, ||M||_F)

  std::size_t dim() const { return static_cast<std::size_t>(similarity.rows()); }
  /// Spectral projector onto the j-th generalized eigenspace.
  CMat projector(std::size_t j) const;
};

SpectralData spectral(const CMat& m, const Tolerances& tol = {});

/// Solves A X - X B = C by Schur reduction of both coefficients.
CMat solve_sylvester(const CMat& a, const CMat& b, const CMat& c, const Tolerances& tol = {});

CMat mat_exp(const CMat& m);

struct FunctionDiagnostics {
  std::vector<std::string> warnings;
  double boundary_margin = 1.0;  // smallest strip margin over output eigenvalues
  bool near_boundary = false;    // some eigenvalue within eps_spec of an edge
  double condition_estimate = 1.0;
};

struct TransversalLog {
  CMat log;
  FunctionDiagnostics diagnostics;
};

/// The unique A with exp(2 pi i A / tau) = M and spectrum inside t.
///
/// Schur form, eigenvalue clusters reordered to be contiguous, one branch of
/// the scalar logarithm per cluster, block Parlett recurrence for the
/// off-diagonal blocks, back-transformation.
TransversalLog log_transversal(const CMat& m, const Transversal& t, const Tolerances& tol = {});

struct ClusterShift {
  std::size_t cluster = 0;
  Complex eigenvalue;
  std::int64_t shift = 0;
};

struct TransversalReduction {
  CMat reduced;
  std::vector<ClusterShift> shifts;
  FunctionDiagnostics diagnostics;
};

/// A - sum_j tau k_j P_j with P_j the spectral projectors of A, choosing k_j
/// so every eigenvalue lands in t.  Leaves exp(2 pi i A / tau) unchanged.
TransversalReduction reduce_to_transversal(const CMat& a, const Transversal& t,
                                           const Tolerances& tol = {});

/// Orthonormal basis (as columns) of ker M; rank is decided by the singular
/// value threshold eps_res * ||M||_2.
/// `floor` bounds the rank threshold from below: eps_res * max(floor, sigma_max).
CMat nullspace(const CMat& m, const Tolerances& tol = {}, double floor = 0.0);

CMat kron(const CMat& a, const CMat& b);

/// Frobenius norm of A B - B A.
double commutator_norm(const CMat& a, const CMat& b);

bool is_upper_triangular(const CMat& m);

// --- modular utilities -----------------------------------------------------

struct SL2Z {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  SL2Z() = default;
  SL2Z(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

  static SL2Z identity() { return {}; }
  static SL2Z translation(std::int64_t n) { return {1, n, 0, 1}; }
  static SL2Z inversion() { return {0, -1, 1, 0}; }

  SL2Z inverse() const { return {d, -b, -c, a}; }
  friend SL2Z operator*(const SL2Z& x, const SL2Z& y);
  bool operator==(const SL2Z& other) const = default;
};

/// (a tau + b) / (c tau + d).
Complex moebius(const SL2Z& g, Complex tau);

/// Real width |tau|^2 / |Re tau|; +infinity when Re tau = 0.
double wd(Complex tau);

struct SmallWidth {
  SL2Z g;
  std::int64_t translation = 0;  // N in g = inversion * translation(N)
  Complex gtau;
  double width = 0.0;
};

/// The move tau -> -(tau + N)^{-1} with the smallest N >= 1 such that
/// Re(tau) + N > 1, giving wd(g tau) = 1 / (Re tau + N) < 1.
SmallWidth find_small_width(Complex tau);

}  // namespace eqrh::numkit
