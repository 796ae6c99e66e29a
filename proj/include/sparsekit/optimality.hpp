#pragma once

#include "sparsekit/types.hpp"

namespace sparsekit {

enum class ConeKind { B, C };  // Bouligand / Clarke

enum class StationarityVariant { NB, TB, NC, TC };

/// Verdict of the alpha-stationarity test together with how badly each
/// coordinate violates its condition (0 when satisfied).
struct AlphaCheck {
  bool stationary = false;
  double worst_violation = 0.0;
  std::vector<double> margins;  // length N
};

/// Fixed-point characterization of x in P(x - alpha * grad r(x)) for the
/// nonnegative sparse model: on the support the gradient must vanish; off
/// the support it must be >= 0 or lie in [-M_s(x)/alpha, 0]. Every
/// inequality is relaxed by tol. Throws InfeasiblePoint when x is not
/// (within tol) nonnegative and s-sparse.
AlphaCheck check_alpha_stationary(const ProblemInstance& inst, const Vector& x,
                                  double alpha, double tol);

/// Closed-form N/T-stationarity tests for the sparsity-only model.
/// NC/TC: gradient vanishes on the support (within tol). NB/TB: the same
/// when the support is full (|supp| = s), the whole gradient when not.
bool check_sparsity_stationarity(const ProblemInstance& inst, const Vector& x,
                                 StationarityVariant variant, double tol);

/// Euclidean norm of the gradient restricted to supp(x); 0 at x = 0.
double restricted_gradient_norm(const ProblemInstance& inst, const Vector& x);

/// Membership of direction d in the tangent cone of the sparse set at x.
/// Clarke: supp(d) within supp(x). Bouligand: |supp(d) union supp(x)| <= s.
bool tangent_cone_contains(const Vector& x, const Vector& d, Index s, ConeKind kind);

struct SecondOrderCheck {
  bool satisfied = false;
  double lambda_min = 0.0;  // +inf sentinel for an empty support
};

/// Smallest eigenvalue of the support Gram matrix A_G^T A_G. strict requires
/// lambda_min > tol (sufficient condition), otherwise lambda_min >= -tol
/// (necessary condition). Empty support is vacuously true.
SecondOrderCheck check_second_order(const ProblemInstance& inst, const Vector& x,
                                    bool strict, double tol);

/// True iff every set of s columns of A is linearly independent, verified by
/// enumerating all C(N, s) supports. Refuses when C(N, s) > 200000.
bool check_s_regular(const Matrix& A, Index s, double tol);

/// All stationarity verdicts for one candidate point, with margins.
struct StationarityReport {
  bool alpha_stationary = false;
  bool nb_stationary = false;
  bool tb_stationary = false;
  bool nc_stationary = false;
  bool tc_stationary = false;
  double restricted_grad_norm = 0.0;
  double worst_violation = 0.0;
  Index support_size = 0;
  double alpha_used = 0.0;
  double tol_used = 0.0;
};

/// Runs every checker at one (alpha, tol). Propagates InfeasiblePoint from
/// the alpha check. Note that an empty support certifies nothing beyond the
/// conventions: the Clarke cone at 0 is the zero subspace, so the restricted
/// gradient norm is 0 and the second-order check is vacuous there.
StationarityReport build_report(const ProblemInstance& inst, const Vector& x,
                                double alpha, double tol);

}  // namespace sparsekit
