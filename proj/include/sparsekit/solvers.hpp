#pragma once

#include <iosfwd>
#include <optional>

#include "sparsekit/types.hpp"

namespace sparsekit {

enum class SolveStatus { converged_epsilon, max_iter, stalled_backtracking };

const char* to_string(SolveStatus status);

/// Initial step-size rule for GSPA / NIHT.
struct Alpha0Policy {
  enum class Mode { fixed, adaptive };

  Mode mode = Mode::adaptive;
  // Fixed mode only; empty means 0.99 / l_r, computed at solve start.
  std::optional<double> fixed_value;

  static Alpha0Policy adaptive() { return {Mode::adaptive, std::nullopt}; }
  static Alpha0Policy fixed(double value) { return {Mode::fixed, value}; }
  static Alpha0Policy fixed_default() { return {Mode::fixed, std::nullopt}; }
};

struct SolverConfig {
  Alpha0Policy alpha0 = Alpha0Policy::adaptive();
  double beta = 0.8;       // backtracking shrink factor, in (0,1)
  double sigma = 1e-5;     // sufficient-decrease constant
  double epsilon = 1e-6;   // stop when ||x^{k+1} - x^k|| <= epsilon
  int max_iter = 5000;
  int max_backtracks = 100;
  bool nonneg = false;     // project onto S intersected with the orthant
};

/// One accepted iteration. ls_regularized is only ever set by CoSaMP/SP when
/// a least-squares subproblem needed a ridge term; it is not part of the
/// trace CSV schema.
struct IterationRecord {
  int k = 0;
  double objective = 0.0;
  double residual = 0.0;       // ||A x - b||
  double alpha = 0.0;          // accepted step (0 for support-swap methods)
  int backtracks = 0;
  bool support_changed = false;
  double delta_norm = 0.0;     // ||x^{k+1} - x^k||
  bool ls_regularized = false;
};

using IterationTrace = std::vector<IterationRecord>;

struct SolveResult {
  Vector x_final;
  SolveStatus status = SolveStatus::max_iter;
  int iterations = 0;
  IterationTrace trace;
  double wall_time = 0.0;  // seconds, this solve only

  // Diagnostics beyond the core contract.
  int safeguard_rejections = 0;  // adaptive GSPA: support-equal candidates that failed
                                 // the decrease test and went to backtracking
  int ls_regularized_count = 0;  // CoSaMP/SP ridge fallbacks
};

struct ArmijoStep {
  Vector point;
  double step = 0.0;
  int m = 0;
};

/// Backtracking search: smallest m in {1..max_backtracks} whose trial point
/// x(alpha_start * beta^m) = P(x - alpha_start * beta^m * grad) satisfies
///   r(trial) <= r(x) - (sigma/2) * ||trial - x||^2 / step^2.
/// Empty result when no m qualifies. On success r(point) <= r(x).
std::optional<ArmijoStep> armijo_search(const ProblemInstance& inst, const Vector& x,
                                        const Vector& grad, double alpha_start,
                                        const SolverConfig& cfg);

/// Gradient support projection: projected gradient step accepted outright
/// when it keeps the working support (adaptive mode additionally demands the
/// sufficient-decrease inequality), Armijo backtracking otherwise.
SolveResult gspa_solve(const ProblemInstance& inst, const SolverConfig& cfg);

/// Normalized iterative hard thresholding with the adaptive step and the
/// standard step-shrinking safeguard on support changes. Honors cfg.nonneg
/// by clamping before thresholding.
SolveResult niht_solve(const ProblemInstance& inst, const SolverConfig& cfg);

/// Compressive sampling matching pursuit. Rejects cfg.nonneg.
SolveResult cosamp_solve(const ProblemInstance& inst, const SolverConfig& cfg);

/// Subspace pursuit. Rejects cfg.nonneg.
SolveResult sp_solve(const ProblemInstance& inst, const SolverConfig& cfg);

/// CSV export: header k,objective,residual,alpha,backtracks,support_changed,
/// delta_norm and one row per iteration.
void write_iteration_trace_csv(std::ostream& os, const IterationTrace& trace);

}  // namespace sparsekit
