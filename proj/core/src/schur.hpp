#pragma once

#include <vector>

#include "eqrh/numkit.hpp"

namespace eqrh::numkit::detail {

/// Complex Schur form M = Q T Q^H with the diagonal of T reordered so that
/// each eigenvalue cluster occupies a contiguous diagonal block.
struct OrderedSchur {
  CMat q;
  CMat t;
  std::vector<int> offsets;       // size clusters + 1
  std::vector<Complex> centers;   // mean eigenvalue per cluster

  std::size_t clusters() const { return centers.size(); }
  int block_size(std::size_t j) const { return offsets[j + 1] - offsets[j]; }
};

/// Scale used to turn eps_spec into an absolute radius for a set of eigenvalues.
double cluster_scale(const std::vector<Complex>& values);

/// Greedy union of values within eps * scale; groups are listed in order of
/// their first member.
std::vector<std::vector<int>> cluster_values(const std::vector<Complex>& values, double radius);

OrderedSchur ordered_schur(const CMat& m, const Tolerances& tol);

/// Solves Ta X - X Tb = C for upper-triangular Ta, Tb by column
/// back-substitution.  Throws SpectrumCollision when a diagonal pair is
/// closer than `radius`.
CMat solve_triangular_sylvester(const CMat& ta, const CMat& tb, const CMat& c, double radius);

void require_square(const CMat& m, const char* what);
void require_finite(const CMat& m, const char* what);

}  // namespace eqrh::numkit::detail
