#include "sparsekit/solvers.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "sparsekit/core.hpp"
#include "sparsekit/projections.hpp"

namespace sparsekit {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Vector project_feasible(const Vector& v, Index s, bool nonneg) {
  return nonneg ? project_sparse_nonneg(v, s) : project_sparse(v, s);
}

void validate_config(const SolverConfig& cfg) {
  if (!(cfg.beta > 0.0 && cfg.beta < 1.0))
    throw ContractViolation("solver config: beta must lie in (0,1)");
  if (cfg.sigma <= 0.0) throw ContractViolation("solver config: sigma must be positive");
  if (cfg.epsilon <= 0.0) throw ContractViolation("solver config: epsilon must be positive");
  if (cfg.max_iter < 1) throw ContractViolation("solver config: max_iter must be positive");
  if (cfg.max_backtracks < 1)
    throw ContractViolation("solver config: max_backtracks must be positive");
}

// Indices of the k largest-magnitude entries, ties to the smaller index,
// returned ascending.
std::vector<Index> top_indices(const Vector& v, Index k) {
  std::vector<Index> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  k = std::min(k, v.size());
  std::nth_element(idx.begin(), idx.begin() + k, idx.end(), [&v](Index a, Index b) {
    const double ma = std::abs(v[a]);
    const double mb = std::abs(v[b]);
    return ma > mb || (ma == mb && a < b);
  });
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<Index> sorted_union(const std::vector<Index>& a, const std::vector<Index>& b) {
  std::vector<Index> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// b - A x accumulated over the active columns only; iterates are s-sparse,
// so this is s*M work instead of M*N.
Vector residual_of_sparse(const ProblemInstance& inst, const Vector& x) {
  Vector r = inst.b;
  for (Index i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) r.noalias() -= x[i] * inst.A.col(i);
  return r;
}

struct TrialPoint {
  Vector point;
  Vector resid;   // b - A * point
  double r = 0.0; // objective at point
  double step = 0.0;
  int m = 0;
};

// The solvers carry the negative gradient A^T (b - A x).
TrialPoint evaluate_step(const ProblemInstance& inst, const Vector& x,
                         const Vector& neg_grad, double step, bool nonneg) {
  TrialPoint t;
  t.step = step;
  t.point = project_feasible(x + step * neg_grad, inst.s, nonneg);
  t.resid = residual_of_sparse(inst, t.point);
  t.r = 0.5 * t.resid.squaredNorm();
  return t;
}

// Acceptance inequality: r(trial) <= r(x) - (sigma/2) ||trial - x||^2 / step^2.
bool sufficient_decrease(const TrialPoint& t, const Vector& x, double rx, double sigma) {
  return t.r <= rx - 0.5 * sigma * (t.point - x).squaredNorm() / (t.step * t.step);
}

std::optional<TrialPoint> armijo_impl(const ProblemInstance& inst, const Vector& x,
                                      double rx, const Vector& neg_grad,
                                      double alpha_start, const SolverConfig& cfg) {
  double step = alpha_start;
  for (int m = 1; m <= cfg.max_backtracks; ++m) {
    step *= cfg.beta;
    TrialPoint t = evaluate_step(inst, x, neg_grad, step, cfg.nonneg);
    t.m = m;
    if (sufficient_decrease(t, x, rx, cfg.sigma)) return t;
  }
  return std::nullopt;
}

struct LsSolution {
  Vector coeffs;  // one per column in the support
  bool regularized = false;
};

// Least squares on the given columns via the normal equations; falls back to
// a ridge of 1e-12 * trace when the Gram system looks singular.
LsSolution least_squares_on(const Matrix& A, const Vector& b, const std::vector<Index>& cols) {
  const auto t = static_cast<Index>(cols.size());
  Matrix sub(A.rows(), t);
  for (Index j = 0; j < t; ++j) sub.col(j) = A.col(cols[static_cast<std::size_t>(j)]);
  const Eigen::MatrixXd gram = sub.transpose() * sub;
  const Eigen::VectorXd rhs = sub.transpose() * b;

  LsSolution out;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  out.coeffs = ldlt.solve(rhs);
  const double tol = 1e-8 * (rhs.norm() + 1e-300);
  if (ldlt.info() != Eigen::Success || (gram * out.coeffs - rhs).norm() > tol) {
    out.regularized = true;
    Eigen::MatrixXd ridged = gram;
    ridged.diagonal().array() += 1e-12 * gram.trace();
    out.coeffs = ridged.ldlt().solve(rhs);
  }
  return out;
}

Vector embed(const std::vector<Index>& cols, const Vector& coeffs, Index n) {
  Vector x = Vector::Zero(n);
  for (std::size_t j = 0; j < cols.size(); ++j) x[cols[j]] = coeffs[static_cast<Index>(j)];
  return x;
}

}  // namespace

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged_epsilon: return "converged_epsilon";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::stalled_backtracking: return "stalled_backtracking";
  }
  return "unknown";
}

std::optional<ArmijoStep> armijo_search(const ProblemInstance& inst, const Vector& x,
                                        const Vector& grad, double alpha_start,
                                        const SolverConfig& cfg) {
  if (alpha_start <= 0.0)
    throw ContractViolation("armijo_search: alpha_start must be positive");
  auto found = armijo_impl(inst, x, objective(inst, x), Vector(-grad), alpha_start, cfg);
  if (!found) return std::nullopt;
  return ArmijoStep{std::move(found->point), found->step, found->m};
}

SolveResult gspa_solve(const ProblemInstance& inst, const SolverConfig& cfg) {
  const auto t0 = Clock::now();
  validate_config(cfg);
  inst.validate(/*allow_degenerate=*/true);

  // l_r up front in fixed mode, lazily for the adaptive fallback step.
  std::optional<double> l_r;
  const auto l_r_value = [&] {
    if (!l_r) l_r = lipschitz_constant(inst.A).l_r;
    return *l_r;
  };

  const bool adaptive = cfg.alpha0.mode == Alpha0Policy::Mode::adaptive;
  double fixed_alpha = 0.0;
  if (!adaptive) {
    const double lr = l_r_value();
    if (lr <= 0.0)
      throw UnsupportedConfig("gspa: fixed step needs l_r > 0, got a zero matrix");
    fixed_alpha = cfg.alpha0.fixed_value.value_or(0.99 / lr);
    if (!(fixed_alpha > 0.0 && fixed_alpha < 1.0 / lr))
      throw UnsupportedConfig("gspa: fixed alpha0 must lie in (0, 1/l_r)");
    if (cfg.sigma > 0.25 / lr)
      throw UnsupportedConfig("gspa: sigma must satisfy sigma <= 1/(4 l_r)");
  }

  SolveResult res;
  Vector x = Vector::Zero(inst.n());
  Vector resid = inst.b;  // b - A x, carried across iterations
  double rx = 0.5 * resid.squaredNorm();
  SupportSet gamma =
      support_of(project_feasible(inst.A.transpose() * inst.b, inst.s, cfg.nonneg));

  for (int k = 0; k < cfg.max_iter; ++k) {
    const Vector neg_grad = inst.A.transpose() * resid;

    double alpha0 = fixed_alpha;
    if (adaptive) {
      // ||A_G^T resid||^2 / ||A_G A_G^T resid||^2; the numerator entries are
      // the already-computed negative gradient restricted to the support.
      alpha0 = 0.0;
      if (!gamma.empty()) {
        double num = 0.0;
        Vector w = Vector::Zero(inst.m());
        for (Index i : gamma.indices) {
          num += neg_grad[i] * neg_grad[i];
          w.noalias() += neg_grad[i] * inst.A.col(i);
        }
        const double den = w.squaredNorm();
        if (den > 0.0) alpha0 = num / den;
      }
      if (alpha0 <= 0.0) {
        // Empty working support or stationary-on-support proxy.
        const double lr = l_r_value();
        alpha0 = lr > 0.0 ? 0.99 / lr : 1.0;
      }
    }

    TrialPoint candidate = evaluate_step(inst, x, neg_grad, alpha0, cfg.nonneg);
    bool accept = support_of(candidate.point) == gamma;
    if (accept && adaptive && !sufficient_decrease(candidate, x, rx, cfg.sigma)) {
      // The adaptive step can exceed 1/L_r, so support equality alone does
      // not guarantee descent; demand the backtracking inequality too.
      accept = false;
      ++res.safeguard_rejections;
    }
    if (!accept) {
      auto found = armijo_impl(inst, x, rx, neg_grad, alpha0, cfg);
      if (!found) {
        res.status = SolveStatus::stalled_backtracking;
        res.x_final = std::move(x);  // objective is non-increasing, so this is the best
        res.iterations = k;
        res.wall_time = seconds_since(t0);
        return res;
      }
      candidate = std::move(*found);
    }

    const double delta = (candidate.point - x).norm();
    assert(candidate.r <= rx + 1e-12);
    SupportSet next_supp = support_of(candidate.point);
    const bool support_changed = !(next_supp == gamma);
    res.trace.push_back({k, candidate.r, candidate.resid.norm(), candidate.step,
                         candidate.m, support_changed, delta});

    x = std::move(candidate.point);
    resid = std::move(candidate.resid);
    rx = candidate.r;
    gamma = std::move(next_supp);

    if (delta <= cfg.epsilon) {
      res.status = SolveStatus::converged_epsilon;
      res.x_final = std::move(x);
      res.iterations = k + 1;
      res.wall_time = seconds_since(t0);
      return res;
    }
  }

  res.status = SolveStatus::max_iter;
  res.x_final = std::move(x);
  res.iterations = cfg.max_iter;
  res.wall_time = seconds_since(t0);
  return res;
}

SolveResult niht_solve(const ProblemInstance& inst, const SolverConfig& cfg) {
  const auto t0 = Clock::now();
  validate_config(cfg);
  inst.validate(/*allow_degenerate=*/true);

  constexpr double kC = 0.01;     // acceptance margin
  constexpr double kKappa = 2.0;  // shrink divisor, > 1/(1-c)

  std::optional<double> l_r;
  const auto l_r_value = [&] {
    if (!l_r) l_r = lipschitz_constant(inst.A).l_r;
    return *l_r;
  };
  const bool adaptive = cfg.alpha0.mode == Alpha0Policy::Mode::adaptive;
  double fixed_alpha = 0.0;
  if (!adaptive) {
    const double lr = l_r_value();
    if (lr <= 0.0)
      throw UnsupportedConfig("niht: fixed step needs l_r > 0, got a zero matrix");
    fixed_alpha = cfg.alpha0.fixed_value.value_or(0.99 / lr);
    if (!(fixed_alpha > 0.0 && fixed_alpha < 1.0 / lr))
      throw UnsupportedConfig("niht: fixed alpha0 must lie in (0, 1/l_r)");
  }

  SolveResult res;
  Vector x = Vector::Zero(inst.n());
  Vector resid = inst.b;  // b - A x, carried
  SupportSet gamma =
      support_of(project_feasible(inst.A.transpose() * inst.b, inst.s, cfg.nonneg));

  for (int k = 0; k < cfg.max_iter; ++k) {
    const Vector g = inst.A.transpose() * resid;  // negative gradient

    double mu = fixed_alpha;
    if (adaptive) {
      mu = 0.0;
      if (!gamma.empty()) {
        double num = 0.0;
        Vector ag = Vector::Zero(inst.m());
        for (Index i : gamma.indices) {
          num += g[i] * g[i];
          ag.noalias() += g[i] * inst.A.col(i);
        }
        const double den = ag.squaredNorm();
        if (den > 0.0) mu = num / den;
      }
      if (mu <= 0.0) {
        const double lr = l_r_value();
        mu = lr > 0.0 ? 0.99 / lr : 1.0;
      }
    }

    Vector trial = project_feasible(x + mu * g, inst.s, cfg.nonneg);
    Vector trial_resid = residual_of_sparse(inst, trial);
    int shrinks = 0;
    if (adaptive && !(support_of(trial) == gamma)) {
      // Step-shrinking safeguard: a support-changing move is accepted only
      // when mu <= (1 - c) ||dx||^2 / ||A dx||^2.
      bool accepted = false;
      while (shrinks < cfg.max_backtracks) {
        const Vector dx = trial - x;
        // A dx = (b - A x) - (b - A trial), both residuals already known.
        const double den = (resid - trial_resid).squaredNorm();
        const double omega = den > 0.0 ? (1.0 - kC) * dx.squaredNorm() / den
                                       : std::numeric_limits<double>::infinity();
        if (mu <= omega) {
          accepted = true;
          break;
        }
        mu /= kKappa * (1.0 - kC);
        trial = project_feasible(x + mu * g, inst.s, cfg.nonneg);
        trial_resid = residual_of_sparse(inst, trial);
        ++shrinks;
      }
      if (!accepted) {
        res.status = SolveStatus::stalled_backtracking;
        res.x_final = std::move(x);
        res.iterations = k;
        res.wall_time = seconds_since(t0);
        return res;
      }
    }

    const double delta = (trial - x).norm();
    const double r_next = 0.5 * trial_resid.squaredNorm();
    SupportSet next_supp = support_of(trial);
    const bool support_changed = !(next_supp == gamma);
    res.trace.push_back({k, r_next, trial_resid.norm(), mu, shrinks, support_changed,
                         delta});

    x = std::move(trial);
    resid = std::move(trial_resid);
    gamma = std::move(next_supp);

    if (delta <= cfg.epsilon) {
      res.status = SolveStatus::converged_epsilon;
      res.x_final = std::move(x);
      res.iterations = k + 1;
      res.wall_time = seconds_since(t0);
      return res;
    }
  }

  res.status = SolveStatus::max_iter;
  res.x_final = std::move(x);
  res.iterations = cfg.max_iter;
  res.wall_time = seconds_since(t0);
  return res;
}

namespace {

// Shared support-swap loop: CoSaMP widens by 2s and prunes the merged fit,
// SP widens by s and re-fits on the pruned support. Stops on ||dx|| <= eps,
// on a residual-improvement stall, or at max_iter.
SolveResult pursuit_solve(const ProblemInstance& inst, const SolverConfig& cfg,
                          bool cosamp) {
  const auto t0 = Clock::now();
  if (cfg.nonneg)
    throw UnsupportedConfig(std::string(cosamp ? "cosamp" : "sp") +
                            ": nonnegative mode is not supported");
  validate_config(cfg);
  inst.validate(/*allow_degenerate=*/true);

  constexpr double kStallTol = 1e-12;
  const Index n = inst.n();

  SolveResult res;
  Vector x = Vector::Zero(n);
  std::vector<Index> gamma;  // current support, ascending

  if (!cosamp) {
    // SP seeds from the best s-term fit of the proxy of b.
    gamma = top_indices(inst.A.transpose() * inst.b, inst.s);
    const LsSolution ls = least_squares_on(inst.A, inst.b, gamma);
    res.ls_regularized_count += ls.regularized ? 1 : 0;
    x = embed(gamma, ls.coeffs, n);
  }

  Vector best_x = x;
  double best_res = residual_of_sparse(inst, x).norm();
  double prev_res = best_res;

  for (int k = 0; k < cfg.max_iter; ++k) {
    const Vector proxy = inst.A.transpose() * residual_of_sparse(inst, x);
    const std::vector<Index> widened = top_indices(proxy, cosamp ? 2 * inst.s : inst.s);
    const std::vector<Index> merged = sorted_union(widened, gamma);

    const LsSolution ls = least_squares_on(inst.A, inst.b, merged);
    bool regularized = ls.regularized;
    Vector pruned = project_sparse(embed(merged, ls.coeffs, n), inst.s);
    std::vector<Index> next_gamma = support_of(pruned).indices;

    Vector next;
    if (cosamp) {
      next = std::move(pruned);
    } else {
      const LsSolution refit = least_squares_on(inst.A, inst.b, next_gamma);
      regularized = regularized || refit.regularized;
      next = embed(next_gamma, refit.coeffs, n);
    }
    res.ls_regularized_count += regularized ? 1 : 0;

    const double delta = (next - x).norm();
    const double res_norm = residual_of_sparse(inst, next).norm();
    const bool support_changed = next_gamma != gamma;
    res.trace.push_back({k, 0.5 * res_norm * res_norm, res_norm, 0.0, 0,
                         support_changed, delta, regularized});

    x = std::move(next);
    gamma = std::move(next_gamma);
    if (res_norm < best_res) {
      best_res = res_norm;
      best_x = x;
    }

    if (delta <= cfg.epsilon) {
      res.status = SolveStatus::converged_epsilon;
      res.x_final = std::move(x);
      res.iterations = k + 1;
      res.wall_time = seconds_since(t0);
      return res;
    }
    if (prev_res - res_norm < kStallTol) {
      res.status = SolveStatus::stalled_backtracking;
      res.x_final = std::move(best_x);
      res.iterations = k + 1;
      res.wall_time = seconds_since(t0);
      return res;
    }
    prev_res = res_norm;
  }

  res.status = SolveStatus::max_iter;
  res.x_final = std::move(x);
  res.iterations = cfg.max_iter;
  res.wall_time = seconds_since(t0);
  return res;
}

}  // namespace

SolveResult cosamp_solve(const ProblemInstance& inst, const SolverConfig& cfg) {
  return pursuit_solve(inst, cfg, /*cosamp=*/true);
}

SolveResult sp_solve(const ProblemInstance& inst, const SolverConfig& cfg) {
  return pursuit_solve(inst, cfg, /*cosamp=*/false);
}

void write_iteration_trace_csv(std::ostream& os, const IterationTrace& trace) {
  os << "k,objective,residual,alpha,backtracks,support_changed,delta_norm\n";
  char buf[160];
  for (const IterationRecord& r : trace) {
    std::snprintf(buf, sizeof(buf), "%d,%.17e,%.17e,%.17e,%d,%d,%.17e\n", r.k,
                  r.objective, r.residual, r.alpha, r.backtracks,
                  r.support_changed ? 1 : 0, r.delta_norm);
    os << buf;
  }
}

}  // namespace sparsekit
