#pragma once

#include "eqrh/bqtau.hpp"

namespace eqrh::bq::detail {

double min_singular(const CMat& m);
double max_singular(const CMat& m);
/// Smallest singular value above eps_res * max(1, largest).
bool invertible(const CMat& m, const Tolerances& tol);

/// Updates boundary margins and warnings; with `strict`, eigenvalues outside
/// the strip by more than eps_spec are rejected.
void record_margins(const CMat& a0, const Transversal& t, const Tolerances& tol, NormalFormDiagnostics& diag,
                    bool strict);

}  // namespace eqrh::bq::detail
