#include "sparsekit/optimality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsekit/core.hpp"
#include "sparsekit/projections.hpp"

namespace sparsekit {

namespace {

void require_feasible_sparse(const ProblemInstance& inst, const Vector& x, double tol,
                             bool require_nonneg) {
  if (x.size() != inst.n())
    throw ContractViolation("stationarity check: x has length " +
                            std::to_string(x.size()) + ", expected " +
                            std::to_string(inst.n()));
  if (require_nonneg) {
    Index worst = 0;
    const double lo = x.minCoeff(&worst);
    if (lo < -tol)
      throw InfeasiblePoint("x violates x >= 0: entry " + std::to_string(worst) +
                            " is " + std::to_string(lo));
  }
  const Index nnz = l0_norm(x, tol);
  if (nnz > inst.s)
    throw InfeasiblePoint("x violates ||x||_0 <= s: " + std::to_string(nnz) +
                          " entries exceed the zero tolerance, s = " +
                          std::to_string(inst.s));
}

Matrix gather_columns(const Matrix& A, const std::vector<Index>& cols) {
  Matrix sub(A.rows(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) sub.col(static_cast<Index>(j)) = A.col(cols[j]);
  return sub;
}

double support_gram_lambda_min(const Matrix& A, const std::vector<Index>& cols) {
  const Matrix sub = gather_columns(A, cols);
  const Eigen::MatrixXd gram = sub.transpose() * sub;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// C(n, k) with saturation well above the enumeration guard.
double binomial_approx(Index n, Index k) {
  double c = 1.0;
  for (Index i = 0; i < k; ++i) {
    c *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    if (c > 1e15) return c;
  }
  return c;
}

}  // namespace

AlphaCheck check_alpha_stationary(const ProblemInstance& inst, const Vector& x,
                                  double alpha, double tol) {
  if (alpha <= 0) throw ContractViolation("check_alpha_stationary: alpha must be positive");
  if (tol < 0) throw ContractViolation("check_alpha_stationary: tol must be nonnegative");
  require_feasible_sparse(inst, x, tol, /*require_nonneg=*/true);

  const Vector g = gradient(inst, x);
  const double ms = kth_largest(x, inst.s, /*absolute=*/false);
  const SupportSet supp = support_of(x, tol);

  AlphaCheck out;
  out.margins.assign(static_cast<std::size_t>(inst.n()), 0.0);
  std::size_t pos = 0;
  for (Index i = 0; i < inst.n(); ++i) {
    const bool on_support = pos < supp.indices.size() && supp.indices[pos] == i;
    if (on_support) ++pos;
    double violation;
    if (on_support) {
      violation = std::abs(g[i]);
    } else {
      // g_i >= 0 or g_i in [-M_s(x)/alpha, 0]; the union is [-M_s(x)/alpha, inf).
      violation = std::max(0.0, -ms / alpha - g[i]);
    }
    out.margins[static_cast<std::size_t>(i)] = violation;
    out.worst_violation = std::max(out.worst_violation, violation);
  }
  out.stationary = out.worst_violation <= tol;
  return out;
}

bool check_sparsity_stationarity(const ProblemInstance& inst, const Vector& x,
                                 StationarityVariant variant, double tol) {
  if (tol < 0) throw ContractViolation("check_sparsity_stationarity: tol must be nonnegative");
  require_feasible_sparse(inst, x, tol, /*require_nonneg=*/false);

  const Vector g = gradient(inst, x);
  const SupportSet supp = support_of(x, tol);

  const bool bouligand =
      variant == StationarityVariant::NB || variant == StationarityVariant::TB;
  if (bouligand && supp.size() < inst.s) {
    return g.lpNorm<Eigen::Infinity>() <= tol;  // whole gradient must vanish
  }
  double worst = 0.0;
  for (Index i : supp.indices) worst = std::max(worst, std::abs(g[i]));
  return worst <= tol;
}

double restricted_gradient_norm(const ProblemInstance& inst, const Vector& x) {
  const Vector g = gradient(inst, x);
  double sq = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) sq += g[i] * g[i];
  }
  return std::sqrt(sq);
}

bool tangent_cone_contains(const Vector& x, const Vector& d, Index s, ConeKind kind) {
  if (x.size() != d.size())
    throw ContractViolation("tangent_cone_contains: x and d differ in length");
  if (l0_norm(x) > s)
    throw ContractViolation("tangent_cone_contains: x has more than s nonzeros");

  if (kind == ConeKind::C) {
    for (Index i = 0; i < d.size(); ++i)
      if (d[i] != 0.0 && x[i] == 0.0) return false;
    return true;
  }
  Index union_size = 0;
  for (Index i = 0; i < d.size(); ++i)
    if (d[i] != 0.0 || x[i] != 0.0) ++union_size;
  return union_size <= s;
}

SecondOrderCheck check_second_order(const ProblemInstance& inst, const Vector& x,
                                    bool strict, double tol) {
  if (x.size() != inst.n())
    throw ContractViolation("check_second_order: x has wrong length");
  if (l0_norm(x) > inst.s)
    throw ContractViolation("check_second_order: x has more than s nonzeros");

  const SupportSet supp = support_of(x);
  SecondOrderCheck out;
  if (supp.empty()) {
    out.lambda_min = std::numeric_limits<double>::infinity();
    out.satisfied = true;  // Clarke cone at 0 is the zero subspace
    return out;
  }
  out.lambda_min = support_gram_lambda_min(inst.A, supp.indices);
  out.satisfied = strict ? out.lambda_min > tol : out.lambda_min >= -tol;
  return out;
}

bool check_s_regular(const Matrix& A, Index s, double tol) {
  const Index n = A.cols();
  if (s < 1 || s > n) throw ContractViolation("check_s_regular: s out of range");
  const double count = binomial_approx(n, s);
  if (count > 200000.0)
    throw ContractViolation("check_s_regular: C(N, s) ~ " + std::to_string(count) +
                            " exceeds the enumeration guard (200000)");

  std::vector<Index> supp(static_cast<std::size_t>(s));
  for (Index i = 0; i < s; ++i) supp[static_cast<std::size_t>(i)] = i;
  while (true) {
    if (support_gram_lambda_min(A, supp) <= tol) return false;
    // next combination in lexicographic order
    Index i = s - 1;
    while (i >= 0 && supp[static_cast<std::size_t>(i)] == n - s + i) --i;
    if (i < 0) break;
    ++supp[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < s; ++j)
      supp[static_cast<std::size_t>(j)] = supp[static_cast<std::size_t>(j - 1)] + 1;
  }
  return true;
}

StationarityReport build_report(const ProblemInstance& inst, const Vector& x,
                                double alpha, double tol) {
  StationarityReport rep;
  rep.alpha_used = alpha;
  rep.tol_used = tol;
  rep.support_size = support_of(x, tol).size();

  const AlphaCheck ac = check_alpha_stationary(inst, x, alpha, tol);
  rep.alpha_stationary = ac.stationary;
  rep.worst_violation = ac.worst_violation;
  rep.nb_stationary = check_sparsity_stationarity(inst, x, StationarityVariant::NB, tol);
  rep.tb_stationary = check_sparsity_stationarity(inst, x, StationarityVariant::TB, tol);
  rep.nc_stationary = check_sparsity_stationarity(inst, x, StationarityVariant::NC, tol);
  rep.tc_stationary = check_sparsity_stationarity(inst, x, StationarityVariant::TC, tol);
  rep.restricted_grad_norm = restricted_gradient_norm(inst, x);
  return rep;
}

}  // namespace sparsekit
