#include "schur.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace eqrh::numkit::detail {

void require_square(const CMat& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << " must be square, got " << m.rows() << "x" << m.cols();
    fail(ErrorKind::NonSquare, os.str());
  }
}

void require_finite(const CMat& m, const char* what) {
  if (!m.allFinite()) fail(ErrorKind::InvalidArgument, std::string(what) + " has non-finite entries");
}

double cluster_scale(const std::vector<Complex>& values) {
  double s = 1.0;
  for (const auto& v : values) s = std::max(s, std::abs(v));
  return s;
}

std::vector<std::vector<int>> cluster_values(const std::vector<Complex>& values, double radius) {
  const int n = static_cast<int>(values.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(values[i] - values[j]) <= radius) {
        int ri = find(i), rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }

  std::vector<std::vector<int>> groups;
  std::vector<int> group_of(n, -1);
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (group_of[r] < 0) {
      group_of[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[group_of[r]].push_back(i);
  }
  return groups;
}

namespace {

// Unitary similarity on rows/columns k, k+1 exchanging T(k,k) and T(k+1,k+1).
void swap_adjacent(CMat& t, CMat& q, int k) {
  const Complex t11 = t(k, k), t22 = t(k + 1, k + 1), t12 = t(k, k + 1);
  const Complex v0 = t12, v1 = t22 - t11;
  const double r = std::hypot(std::abs(v0), std::abs(v1));
  if (r == 0.0) return;
  const Complex c = v0 / r, s = v1 / r;
  // G = [[c, -conj(s)], [s, conj(c)]], first column is the t22-eigenvector.
  const Complex g00 = c, g01 = -std::conj(s), g10 = s, g11 = std::conj(c);
  const int n = static_cast<int>(t.rows());
  for (int j = 0; j < n; ++j) {
    const Complex x = t(k, j), y = t(k + 1, j);
    t(k, j) = std::conj(g00) * x + std::conj(g10) * y;
    t(k + 1, j) = std::conj(g01) * x + std::conj(g11) * y;
  }
  for (int i = 0; i < n; ++i) {
    const Complex x = t(i, k), y = t(i, k + 1);
    t(i, k) = x * g00 + y * g10;
    t(i, k + 1) = x * g01 + y * g11;
    const Complex qx = q(i, k), qy = q(i, k + 1);
    q(i, k) = qx * g00 + qy * g10;
    q(i, k + 1) = qx * g01 + qy * g11;
  }
  t(k + 1, k) = 0.0;
}

}  // namespace

OrderedSchur ordered_schur(const CMat& m, const Tolerances& tol) {
  require_square(m, "matrix");
  require_finite(m, "matrix");
  const int n = static_cast<int>(m.rows());
  OrderedSchur out;
  if (n == 0) {
    out.q = CMat(0, 0);
    out.t = CMat(0, 0);
    out.offsets = {0};
    return out;
  }

  if (is_upper_triangular(m)) {
    out.q = CMat::Identity(n, n);
    out.t = m;
  } else {
    Eigen::ComplexSchur<CMat> schur(n);
    schur.compute(m);
    if (schur.info() != Eigen::Success) {
      std::ostringstream os;
      os << "complex Schur iteration did not converge within "
         << Eigen::ComplexSchur<CMat>::m_maxIterationsPerRow * n << " iterations";
      fail(ErrorKind::ConvergenceFailure, os.str());
    }
    out.q = schur.matrixU();
    out.t = schur.matrixT();
    for (int j = 0; j < n; ++j)
      for (int i = j + 1; i < n; ++i) out.t(i, j) = 0.0;
  }

  std::vector<Complex> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = out.t(i, i);
  const auto groups = cluster_values(diag, tol.eps_spec * cluster_scale(diag));

  std::vector<int> rank(n);
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (int idx : groups[g]) rank[idx] = static_cast<int>(g);

  // Perturbed Jordan blocks split by ~sqrt(u); clusters whose decoupling
  // needs a transform larger than 1/sqrt(eps_spec) are merged.
  const double defect_bound = 1.0 / std::sqrt(tol.eps_spec);
  for (;;) {
    for (bool changed = true; changed;) {
      changed = false;
      for (int k = 0; k + 1 < n; ++k) {
        if (rank[k] > rank[k + 1]) {
          swap_adjacent(out.t, out.q, k);
          std::swap(rank[k], rank[k + 1]);
          changed = true;
        }
      }
    }
    out.offsets.assign(1, 0);
    for (int i = 1; i < n; ++i)
      if (rank[i] != rank[i - 1]) out.offsets.push_back(i);
    out.offsets.push_back(n);
    const std::size_t p = out.offsets.size() - 1;

    int merge_from = -1, merge_into = -1;
    for (std::size_t i = 0; i < p && merge_from < 0; ++i)
      for (std::size_t j = i + 1; j < p; ++j) {
        const int ri = out.offsets[i], si = out.offsets[i + 1] - ri;
        const int rj = out.offsets[j], sj = out.offsets[j + 1] - rj;
        const CMat tij = out.t.block(ri, rj, si, sj);
        if (tij.norm() == 0.0) continue;
        const CMat x = solve_triangular_sylvester(out.t.block(ri, ri, si, si), out.t.block(rj, rj, sj, sj), -tij, 0.0);
        if (!x.allFinite() || x.norm() > defect_bound) {
          merge_into = rank[ri];
          merge_from = rank[rj];
          break;
        }
      }
    if (merge_from < 0) break;
    for (int& r : rank)
      if (r == merge_from) r = merge_into;
    // Renumber so ranks stay consecutive in order of first appearance.
    std::vector<int> order;
    for (int r : rank)
      if (std::find(order.begin(), order.end(), r) == order.end()) order.push_back(r);
    std::sort(order.begin(), order.end());
    for (int& r : rank) r = static_cast<int>(std::find(order.begin(), order.end(), r) - order.begin());
  }

  for (std::size_t g = 0; g + 1 < out.offsets.size(); ++g) {
    const int begin = out.offsets[g], end = out.offsets[g + 1];
    Complex mean = 0.0;
    for (int i = begin; i < end; ++i) mean += out.t(i, i);
    out.centers.push_back(mean / static_cast<double>(end - begin));
  }
  return out;
}

CMat solve_triangular_sylvester(const CMat& ta, const CMat& tb, const CMat& c, double radius) {
  const Eigen::Index r = ta.rows(), s = tb.rows();
  CMat x = CMat::Zero(r, s);
  CVec rhs(r);
  for (Eigen::Index j = 0; j < s; ++j) {
    rhs = c.col(j);
    for (Eigen::Index i = 0; i < j; ++i) rhs += tb(i, j) * x.col(i);
    const Complex mu = tb(j, j);
    for (Eigen::Index p = r - 1; p >= 0; --p) {
      Complex acc = rhs(p);
      for (Eigen::Index q = p + 1; q < r; ++q) acc -= ta(p, q) * x(q, j);
      const Complex d = ta(p, p) - mu;
      if (std::abs(d) <= radius) {
        std::ostringstream os;
        os << "eigenvalues " << ta(p, p) << " and " << mu << " coincide within " << radius;
        fail(ErrorKind::SpectrumCollision, os.str());
      }
      x(p, j) = acc / d;
    }
  }
  return x;
}

}  // namespace eqrh::numkit::detail
