#pragma once

// The Laurent-polynomial part of the noncommutative torus A_theta
// (U2 U1 = e^{2 pi i theta} U1 U2), its derivations and SL(2, Z)
// automorphisms, the functor psi_* into free holomorphic bundles, standard
// bundle data, stability phases, divisors on X_tau and Nori-finiteness.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "eqrh/bqtau.hpp"
#include "eqrh/numkit.hpp"

namespace eqrh::atheta {

using Monomial = std::pair<std::int64_t, std::int64_t>;

/// Finitely supported sum of c_{n1,n2} U1^{n1} U2^{n2} (normal order).
class AElem {
 public:
  explicit AElem(double theta);

  static AElem monomial(std::int64_t n1, std::int64_t n2, Complex c, double theta);
  static AElem unit(double theta) { return monomial(0, 0, 1.0, theta); }
  static AElem u1(double theta) { return monomial(1, 0, 1.0, theta); }
  static AElem u2(double theta) { return monomial(0, 1, 1.0, theta); }

  double theta() const noexcept { return theta_; }
  const std::map<Monomial, Complex>& coeffs() const noexcept { return coeffs_; }
  Complex coeff(std::int64_t n1, std::int64_t n2) const;
  void add(std::int64_t n1, std::int64_t n2, Complex c);
  bool is_zero() const { return coeffs_.empty(); }
  /// Largest coefficient modulus.
  double max_abs() const;

  AElem scaled(Complex s) const;
  friend AElem operator+(const AElem& x, const AElem& y);
  friend AElem operator-(const AElem& x, const AElem& y);

 private:
  double theta_;
  std::map<Monomial, Complex> coeffs_;
};

/// e^{2 pi i theta k}, with theta k reduced mod 1 first.
Complex q_power(double theta, std::int64_t k);

AElem a_mul(const AElem& x, const AElem& y);
/// x^k for k >= 0; x must be a monomial when k < 0.
AElem a_pow(const AElem& x, std::int64_t k);

struct Omega {
  Complex w1;
  Complex w2;
};

/// delta_1 or delta_2: U1^{n1} U2^{n2} -> 2 pi i n_j U1^{n1} U2^{n2}.
AElem delta_j(const AElem& x, int j);
AElem delta_omega(const AElem& x, const Omega& w);
/// delta_tau = tau delta_1 + delta_2.
AElem delta_tau(const AElem& x, Complex tau);

enum class Gen { g1, g2, g1_inv, g2_inv };

using Word = std::vector<Gen>;

Word inverse_word(const Word& w);
/// Applies the letters of `w` first to last.
AElem sigma_apply(const Word& w, const AElem& x);
/// The matrix g_{w1} g_{w2} ... acting on (w1, w2).
numkit::SL2Z word_matrix(const Word& w);
Omega act(const numkit::SL2Z& g, const Omega& w);

/// max over |n_i| <= bound of |sigma^{-1} delta_w sigma (U^n) - delta_{g w}(U^n)|.
double check_intertwine(const Word& w, const Omega& omega, int bound, double theta);

/// Scalar Laurent polynomial: power -> coefficient.
using Laurent1 = std::map<std::int64_t, Complex>;

AElem psi_embed(const Laurent1& f, double theta);
/// max |psi(2 pi i delta f) - tau delta_1(psi(f))|.
double psi_intertwining_residual(const Laurent1& f, Complex tau, double theta);

/// (A_theta^n, delta_tau + conn) with conn upper triangular, scalar diagonal.
struct FrVectObj {
  int n = 0;
  std::vector<std::vector<AElem>> conn;
  double theta = 0.0;
  Complex tau;

  /// Throws InvalidArgument unless the normal form invariants hold.
  void validate() const;
  /// conn(i, i) / (2 pi i).
  std::vector<Complex> diagonal_parameters() const;
};

FrVectObj zero_connection(int n, double theta, Complex tau);

/// delta_tau(v_i) + sum_j conn(i, j) v_j.
std::vector<AElem> apply_connection(const FrVectObj& obj, const std::vector<AElem>& v);

struct PsiStar {
  FrVectObj bundle;
  CMat basis;  // unitary bringing A0 to the upper-triangular form used
};

PsiStar psi_star(const bq::NormalForm& nf);

struct ExtensionCheck {
  FrVectObj bundle;
  double iota_residual = 0.0;  // inclusion of the rank-one sub
  double pi_residual = 0.0;    // projection to the quotient
};

/// max residuals of iota and pi commuting with the connections, tested on
/// a fixed family of probe vectors.
ExtensionCheck extension_residuals(const FrVectObj& big, Complex zprime, const FrVectObj& quotient);

/// The extension 0 -> (A_theta, delta_tau + 2 pi i z') -> E -> sub -> 0
/// whose connection has first row (2 pi i z', row).
ExtensionCheck build_extension(Complex zprime, const std::vector<AElem>& row, const FrVectObj& sub);

struct StdBundleData {
  std::int64_t deg = 0;
  double rk = 0.0;
  double slope = 0.0;
};

StdBundleData std_bundle_data(std::int64_t m, std::int64_t n, double theta);

struct PsSwap {
  std::int64_t image_rank = 0;  // -deg(E)
  double image_degree = 0.0;    // rk(E)
  bool torsion = false;         // m = 0: the image is a point sheaf
};

PsSwap ps_k_swap(std::int64_t m, std::int64_t n, double theta);

Complex stability_Z(std::int64_t m, std::int64_t n, double theta);
/// arg(Z) / pi in (0, 1].
double phase(std::int64_t m, std::int64_t n, double theta);

/// (s, t) with z = s + t tau.
std::pair<double, double> lattice_coordinates(Complex z, Complex tau);

class DivisorXtau {
 public:
  struct Point {
    Complex p;
    std::int64_t mult = 0;
  };

  explicit DivisorXtau(Complex tau, const Tolerances& tol = {});

  /// Reduces z into {s + t tau : 0 <= s, t < 1} and merges within eps_key.
  void add(Complex z, std::int64_t mult);
  Complex tau() const { return tau_; }
  const std::vector<Point>& points() const { return points_; }
  std::int64_t degree() const;
  Complex weighted_sum() const;

 private:
  Complex tau_;
  Tolerances tol_;
  std::vector<Point> points_;
};

Complex reduce_mod_lattice(Complex z, Complex tau, double eps = 0.0);

/// sum n_i (b_i, z'_i) -> sum n_i [-z'_i]; the b labels are dropped.
DivisorXtau kmap(const bq::K0ClassB& c);

bool divisor_equivalent(const DivisorXtau& d1, const DivisorXtau& d2, const Tolerances& tol = {});

struct NoriReport {
  bool finite = false;
  std::int64_t order = 0;  // lcm of eigenvalue orders when finite
  std::vector<std::string> reasons;
};

NoriReport nori_check(const CMat& m, int d_max = 64, const Tolerances& tol = {});
NoriReport nori_check(const bq::RepZ2& rep, int d_max = 64, const Tolerances& tol = {});
bool is_nori_finite(const CMat& m, int d_max = 64, const Tolerances& tol = {});
bool is_nori_finite(const bq::RepZ2& rep, int d_max = 64, const Tolerances& tol = {});

}  // namespace eqrh::atheta
