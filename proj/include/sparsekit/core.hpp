#pragma once

#include "sparsekit/types.hpp"

namespace sparsekit {

/// r(x) = (1/2) ||A x - b||^2.
double objective(const ProblemInstance& inst, const Vector& x);

/// grad r(x) = A^T (A x - b).
Vector gradient(const ProblemInstance& inst, const Vector& x);

/// Safeguarded estimate of lambda_max(A^T A) by power iteration.
///
/// Deterministic all-ones start, stops when the relative Rayleigh-quotient
/// change drops below 1e-10 or after 1000 iterations; the returned l_r is the
/// final Rayleigh quotient inflated by 1.01 so that step sizes chosen as
/// alpha < 1/l_r stay strictly below 1/lambda_max. A zero matrix yields
/// l_r = 0 with converged = true; callers needing 1/l_r must reject that.
SpectralInfo lipschitz_constant(const Matrix& A);

/// s-th largest entry of x (of |x| when absolute), counted with multiplicity.
double kth_largest(const Vector& x, Index s, bool absolute);

}  // namespace sparsekit
