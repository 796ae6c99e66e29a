#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sparsekit/types.hpp"

namespace sparsekit {

/// Entrywise clamp onto the nonnegative orthant.
template <typename Derived>
Vector project_nonneg(const Eigen::MatrixBase<Derived>& x) {
  return x.cwiseMax(0.0);
}

/// Hard thresholding: keeps the s largest-magnitude entries, zeroes the rest.
/// Magnitude ties are broken toward the smaller index, so the result is a
/// deterministic function of the input.
template <typename Derived>
Vector project_sparse(const Eigen::MatrixBase<Derived>& x, Index s) {
  Vector v = x;
  const Index n = v.size();
  if (s < 1 || s > n)
    throw ContractViolation("project_sparse: s must satisfy 1 <= s <= N");
  if (s == n) return v;

  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  // Partial selection; the comparator is a strict total order, so the first
  // s positions match sort-then-take exactly.
  std::nth_element(idx.begin(), idx.begin() + s, idx.end(), [&v](Index a, Index b) {
    const double ma = std::abs(v[a]);
    const double mb = std::abs(v[b]);
    return ma > mb || (ma == mb && a < b);
  });

  Vector out = Vector::Zero(n);
  for (Index j = 0; j < s; ++j) {
    const Index i = idx[static_cast<std::size_t>(j)];
    out[i] = v[i];
  }
  return out;
}

/// Projection onto {y >= 0, ||y||_0 <= s}: the nonnegative clamp followed by
/// hard thresholding. The order matters; composing the other way round is
/// not a projection onto the intersection.
template <typename Derived>
Vector project_sparse_nonneg(const Eigen::MatrixBase<Derived>& x, Index s) {
  return project_sparse(project_nonneg(x), s);
}

/// Indices i with |x_i| > zero_tol, ascending. The projections above write
/// literal zeros, so the default zero_tol = 0 is an exact nonzero test.
template <typename Derived>
SupportSet support_of(const Eigen::MatrixBase<Derived>& x, double zero_tol = 0.0) {
  SupportSet s;
  for (Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > zero_tol) s.indices.push_back(i);
  }
  return s;
}

/// Number of entries with |x_i| > zero_tol.
template <typename Derived>
Index l0_norm(const Eigen::MatrixBase<Derived>& x, double zero_tol = 0.0) {
  Index c = 0;
  for (Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > zero_tol) ++c;
  }
  return c;
}

/// Test oracle: exhaustive projection onto {||y||_0 <= s} (intersected with
/// the nonnegative orthant when nonneg). Enumerates supports of size <= s in
/// lexicographic order and keeps the first minimizer, so distance ties
/// resolve to the lexicographically smallest support. Refuses N > 20.
Vector brute_force_projection(const Vector& x, Index s, bool nonneg);

}  // namespace sparsekit
