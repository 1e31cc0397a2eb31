#pragma once

// Objects of the category B_q^tau: theta Z-equivariant regular singular
// connections on C*, their constant normal forms, the functors to and from
// representations of Z^2, the rigid tensor structure, Hom, kernels,
// cokernels, composition series and the Grothendieck group.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eqrh/laurent.hpp"
#include "eqrh/numkit.hpp"

namespace eqrh::bq {

using laurent::Params;
using laurent::PolyMat;
using numkit::Transversal;

/// (C[z, 1/z]^n, sigma, delta + A) with sigma(m)(z) = B m(q z).
struct BqObject {
  PolyMat a;
  PolyMat b;
  double theta = 0.0;
  std::optional<double> transversal_offset;

  BqObject(PolyMat a, PolyMat b, double theta, std::optional<double> offset = std::nullopt);

  int dim() const { return a.dim(); }
  Complex tau() const { return a.params().tau; }
  const Params& params() const { return a.params(); }
};

struct Validation {
  double negative_part = 0.0;     // norm of the z^{<0} part of A
  double b0_min_singular = 0.0;   // smallest singular value of the lowest B term
  double equivariance = 0.0;      // ||delta B + A B - B A(qz)||
  double equivariance_scale = 1.0;
};

/// Residuals of every object invariant, without throwing.
Validation residuals(const BqObject& obj);
/// Throws RegularityViolation, SingularB or EquivarianceViolation.
Validation validate(const BqObject& obj, const Tolerances& tol = {});

struct NormalFormDiagnostics {
  double b_residual = 0.0;         // ||B' - B0|| after the series gauge
  double gauge_residual = 0.0;     // ||P^{-1} A P + P^{-1} delta P - A0|| up to order K
  double first_discarded = 0.0;    // norm of the first order beyond K
  double commutator = 0.0;         // ||[A0, B0]||
  double snapped = 0.0;            // roundoff removed by shears
  double boundary_margin = 1.0;
  int shear_passes = 0;
  std::vector<std::string> warnings;
};

/// Constant commuting (A0, B0) with the spectrum of A0 inside the transversal.
struct NormalForm {
  CMat a0;
  CMat b0;
  Transversal transversal;
  double theta = 0.0;
  laurent::GaugeRecord gauge;
  NormalFormDiagnostics diagnostics;

  int dim() const { return static_cast<int>(a0.rows()); }
  Complex tau() const { return transversal.tau(); }
  Params params() const { return Params::from_theta(transversal.tau(), theta); }
};

/// Checks the invariants and fills diagnostics; the gauge is the identity.
NormalForm make_normal_form(CMat a0, CMat b0, const Transversal& t, double theta, const Tolerances& tol = {});

/// Two commuting invertible matrices.
struct RepZ2 {
  CMat m1;
  CMat m2;

  int dim() const { return static_cast<int>(m1.rows()); }
};

RepZ2 make_rep(CMat m1, CMat m2, const Tolerances& tol = {});

struct Morphism {
  NormalForm source;
  NormalForm target;
  CMat phi;  // target dim x source dim
};

/// phi A0_src - A0_tgt phi and phi B0_src - B0_tgt phi, Frobenius norms added.
double intertwining_residual(const CMat& phi, const NormalForm& src, const NormalForm& tgt);

NormalForm normalize(const BqObject& obj, const Transversal& t, int truncation, const Tolerances& tol = {});

NormalForm functor_F(const RepZ2& rep, const Transversal& t, double theta, const Tolerances& tol = {});
RepZ2 fiber_omega(const NormalForm& nf);

/// The BqObject with constant A = A0, B = B0.
BqObject to_object(const NormalForm& nf);

NormalForm unit_object(const Transversal& t, double theta);
NormalForm direct_sum(const NormalForm& x, const NormalForm& y, const Tolerances& tol = {});
NormalForm tensor(const NormalForm& x, const NormalForm& y, const Tolerances& tol = {});
NormalForm dual(const NormalForm& x, const Tolerances& tol = {});

/// Evaluation X (x) X^v -> 1 and coevaluation 1 -> X^v (x) X as matrices,
/// with the two triangle identities and the intertwining residuals.
struct Rigidity {
  CMat evaluation;    // 1 x n^2
  CMat coevaluation;  // n^2 x 1
  double triangle_left = 0.0;   // ||(ev (x) 1)(1 (x) coev) - 1_X||
  double triangle_right = 0.0;  // ||(1 (x) ev)(coev (x) 1) - 1_{X^v}||
  double evaluation_residual = 0.0;
  double coevaluation_residual = 0.0;
};

Rigidity rigidity(const NormalForm& x, const Tolerances& tol = {});

void require_same_category(const NormalForm& x, const NormalForm& y);

std::vector<Morphism> hom_basis(const NormalForm& x, const NormalForm& y, const Tolerances& tol = {});

struct ModeScan {
  int k_scan = 0;
  std::vector<std::pair<int, int>> nonzero;  // (k, dim) with dim > 0
};

/// Solutions of (A_y + tau k) phi = phi A_x, phi B_x = q^k B_y phi for
/// 0 < |k| <= k_scan; empty for objects in a common transversal.
ModeScan hom_mode_scan(const NormalForm& x, const NormalForm& y, int k_scan = 8, const Tolerances& tol = {});

/// Seeded search for an invertible intertwiner x -> y.
std::optional<Morphism> find_isomorphism(const NormalForm& x, const NormalForm& y, std::uint64_t seed,
                                         int trials = 32, const Tolerances& tol = {});

struct SubQuotient {
  NormalForm object;
  Morphism map;  // inclusion for kernels, projection for cokernels
};

SubQuotient kernel(const Morphism& m, const Tolerances& tol = {});
SubQuotient cokernel(const Morphism& m, const Tolerances& tol = {});

struct JointEigen {
  Complex lambda;
  Complex b;
};

/// Composition series factors in the order they are split off.
std::vector<JointEigen> decompose(const NormalForm& nf, const Tolerances& tol = {});

/// Z-linear combination of simple labels (b, z' mod tau Z).
class K0ClassB {
 public:
  struct Term {
    Complex b;
    Complex zprime;
    std::int64_t mult = 0;
  };

  K0ClassB(const Transversal& ambient, const Tolerances& tol = {});

  static K0ClassB simple(Complex b, Complex zprime, const Transversal& ambient, const Tolerances& tol = {});

  void add(Complex b, Complex zprime, std::int64_t mult);
  const std::vector<Term>& terms() const { return terms_; }
  const Transversal& ambient() const { return ambient_; }
  const Tolerances& tolerances() const { return tol_; }
  bool empty() const { return terms_.empty(); }
  std::int64_t rank() const;

  friend K0ClassB k0_add(const K0ClassB& x, const K0ClassB& y);
  friend K0ClassB k0_sub(const K0ClassB& x, const K0ClassB& y);
  friend bool operator==(const K0ClassB& x, const K0ClassB& y);

 private:
  Transversal ambient_;
  Tolerances tol_;
  std::vector<Term> terms_;  // sorted by (Re z', Im z', Re b, Im b)
};

K0ClassB k0_add(const K0ClassB& x, const K0ClassB& y);
K0ClassB k0_sub(const K0ClassB& x, const K0ClassB& y);

K0ClassB k0_class(const NormalForm& nf, const Tolerances& tol = {});
K0ClassB k0_class(const NormalForm& nf, const Transversal& ambient, const Tolerances& tol = {});

int h0_dim(const NormalForm& nf, const Tolerances& tol = {});

}  // namespace eqrh::bq
