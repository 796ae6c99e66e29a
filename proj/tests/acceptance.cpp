// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one [PASS]/[FAIL] line per criterion. Exit code = number of failed
// criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sparsekit/bench.hpp"
#include "sparsekit/core.hpp"
#include "sparsekit/optimality.hpp"
#include "sparsekit/projections.hpp"
#include "sparsekit/rng.hpp"
#include "sparsekit/solvers.hpp"

using namespace sparsekit;

namespace {

using Clock = std::chrono::steady_clock;

double secs_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

Vector random_signed_vector(std::uint64_t seed, Index n) {
  SplitMix64 rng(seed);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

bench::ExperimentSpec paper_spec(bool nonneg, double sigma0, std::uint64_t seed) {
  bench::ExperimentSpec spec;
  spec.n = 1000;
  spec.m_rule = bench::MRule::quarter();
  spec.s_rule = bench::SRule::pct5();
  spec.nonneg = nonneg;
  spec.sigma0 = sigma0;
  spec.trials = 40;
  spec.base_seed = seed;
  spec.solvers = {bench::SolverId::gspa};
  return spec;
}

struct Run {
  ProblemInstance inst;
  SolveResult result;
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Suite {
  int failures = 0;
  void report(int id, const std::string& name, const Outcome& o) {
    std::printf("[%s] criterion %2d: %s -- %s\n", o.pass ? "PASS" : "FAIL", id,
                name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  void run(int id, const std::string& name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    report(id, name, o);
  }
};

// ---- shared experiment runs ------------------------------------------------

std::vector<Run> solve_trials(const bench::ExperimentSpec& spec, bench::SolverId id,
                              const SolverConfig& cfg) {
  std::vector<Run> runs;
  runs.reserve(static_cast<std::size_t>(spec.trials));
  for (int t = 0; t < spec.trials; ++t) {
    Run run{bench::gen_instance(spec, t), {}};
    switch (id) {
      case bench::SolverId::gspa: run.result = gspa_solve(run.inst, cfg); break;
      case bench::SolverId::niht: run.result = niht_solve(run.inst, cfg); break;
      case bench::SolverId::cosamp: run.result = cosamp_solve(run.inst, cfg); break;
      case bench::SolverId::sp: run.result = sp_solve(run.inst, cfg); break;
    }
    runs.push_back(std::move(run));
  }
  return runs;
}

struct Stats {
  double mean_residual = 0, mean_linf = 0, mean_wall_ms = 0, success = 0;
};

Stats stats_of(const std::vector<Run>& runs) {
  Stats s;
  for (const Run& r : runs) {
    s.mean_residual += (r.inst.b - r.inst.A * r.result.x_final).norm();
    s.mean_linf += (r.result.x_final - *r.inst.x_orig).lpNorm<Eigen::Infinity>();
    s.mean_wall_ms += r.result.wall_time * 1e3;
    if ((r.result.x_final - *r.inst.x_orig).lpNorm<Eigen::Infinity>() <= 1e-5)
      s.success += 1.0;
  }
  const auto n = static_cast<double>(runs.size());
  s.mean_residual /= n;
  s.mean_linf /= n;
  s.mean_wall_ms /= n;
  s.success /= n;
  return s;
}

}  // namespace

int main() {
  Suite suite;
  SolverConfig paper_cfg;  // adaptive, beta 0.8, sigma 1e-5, eps 1e-6, 5000 iters

  // Criterion 3 state, reused by criterion 6.
  std::vector<Run> fixed_runs;
  // Criterion 4/9/10/11 state.
  std::vector<Run> b_gspa, b_niht;            // nonneg paper-scale run
  std::vector<Run> c_gspa, c_niht, c_cosamp, c_sp;  // signed paper-scale run
  std::vector<Run> noisy_runs;                // criterion 5

  // 1. Projection oracle equivalence.
  suite.run(1, "projection oracle equivalence", [] {
    const auto t0 = Clock::now();
    double worst = 0.0;
    int trials = 0;
    for (Index s : {1, 2, 3}) {
      for (std::uint64_t rep = 0; rep < 1000; ++rep) {
        const Vector x = random_signed_vector(100 + 7919 * rep + 13 * s, 10);
        const double fast = (x - project_sparse_nonneg(x, s)).norm();
        const double oracle = (x - brute_force_projection(x, s, true)).norm();
        worst = std::max(worst, std::abs(fast - oracle));
        ++trials;
      }
    }
    const double elapsed = secs_since(t0);
    Outcome o;
    o.pass = worst <= 1e-12 && elapsed < 5.0;
    o.detail = std::to_string(trials) + " trials, worst gap " + fmt(worst) + ", " +
               fmt(elapsed) + " s";
    return o;
  });

  // 2. Order-of-projections counterexample.
  suite.run(2, "projection order counterexample", [] {
    Vector x(2);
    x << -2, 1;
    const Vector composed = project_sparse_nonneg(x, 1);
    const Vector reversed = project_nonneg(project_sparse(x, 1));
    Outcome o;
    o.pass = composed[0] == 0.0 && composed[1] == 1.0 && reversed[0] == 0.0 &&
             reversed[1] == 0.0;
    o.detail = "P_S.P_+ gives (" + fmt(composed[0]) + "," + fmt(composed[1]) +
               "), reverse gives (" + fmt(reversed[0]) + "," + fmt(reversed[1]) + ")";
    return o;
  });

  // 3. Per-iteration descent bound for fixed-step runs.
  suite.run(3, "fixed-step descent bound", [&] {
    bench::ExperimentSpec spec;
    spec.n = 100;
    spec.m_rule = bench::MRule::given(40);
    spec.s_rule = bench::SRule::given(8);
    spec.nonneg = true;
    spec.trials = 50;
    spec.base_seed = 300;
    spec.solvers = {bench::SolverId::gspa};

    SolverConfig cfg = paper_cfg;
    cfg.nonneg = true;
    cfg.alpha0 = Alpha0Policy::fixed_default();

    int violations = 0, iterations = 0, converged = 0;
    for (int t = 0; t < spec.trials; ++t) {
      Run run{bench::gen_instance(spec, t), {}};
      const double l_r = lipschitz_constant(run.inst.A).l_r;
      const double alpha0 = 0.99 / l_r;
      const double c = std::min(0.5 * (alpha0 - l_r * alpha0 * alpha0), 0.5 * cfg.sigma);
      run.result = gspa_solve(run.inst, cfg);

      double prev = 0.5 * run.inst.b.squaredNorm();
      for (const auto& row : run.result.trace) {
        const double bound =
            prev - c * row.delta_norm * row.delta_norm / (row.alpha * row.alpha);
        if (row.objective > bound + 1e-12) ++violations;
        prev = row.objective;
        ++iterations;
      }
      if (run.result.status == SolveStatus::converged_epsilon) ++converged;
      fixed_runs.push_back(std::move(run));
    }
    Outcome o;
    o.pass = violations == 0;
    o.detail = "0 violations allowed, found " + std::to_string(violations) + " over " +
               std::to_string(iterations) + " iterations (" + std::to_string(converged) +
               "/50 converged)";
    return o;
  });

  // 4. Exact recovery at paper scale.
  suite.run(4, "exact recovery at paper scale", [&] {
    SolverConfig nn_cfg = paper_cfg;
    nn_cfg.nonneg = true;
    const auto spec_b = paper_spec(true, 0.0, 20);
    b_gspa.reserve(40);
    b_niht.reserve(40);
    for (int t = 0; t < spec_b.trials; ++t) {
      // Interleave the two solvers, alternating who goes first, so the
      // wall-clock comparison sees the same cache state on average.
      Run g{bench::gen_instance(spec_b, t), {}};
      Run n{g.inst, {}};
      if (t % 2 == 0) {
        g.result = gspa_solve(g.inst, nn_cfg);
        n.result = niht_solve(n.inst, nn_cfg);
      } else {
        n.result = niht_solve(n.inst, nn_cfg);
        g.result = gspa_solve(g.inst, nn_cfg);
      }
      b_gspa.push_back(std::move(g));
      b_niht.push_back(std::move(n));
    }

    const auto spec_c = paper_spec(false, 0.0, 21);
    c_gspa = solve_trials(spec_c, bench::SolverId::gspa, paper_cfg);
    c_niht = solve_trials(spec_c, bench::SolverId::niht, paper_cfg);
    c_cosamp = solve_trials(spec_c, bench::SolverId::cosamp, paper_cfg);
    c_sp = solve_trials(spec_c, bench::SolverId::sp, paper_cfg);

    const Stats sb = stats_of(b_gspa);
    const Stats sc = stats_of(c_gspa);
    Outcome o;
    o.pass = sb.mean_linf <= 1e-5 && sb.mean_residual <= 1e-3 && sb.success >= 0.90 &&
             sc.mean_linf <= 1e-5 && sc.mean_residual <= 1e-3 && sc.success >= 0.90;
    o.detail = "nonneg: linf " + fmt(sb.mean_linf) + ", residual " +
               fmt(sb.mean_residual) + ", success " + fmt(100 * sb.success) +
               "%; signed: linf " + fmt(sc.mean_linf) + ", residual " +
               fmt(sc.mean_residual) + ", success " + fmt(100 * sc.success) + "%";
    return o;
  });

  // 5. Noisy recovery band.
  suite.run(5, "noisy recovery band", [&] {
    bench::ExperimentSpec spec = paper_spec(true, 0.01, 22);
    SolverConfig cfg = paper_cfg;
    cfg.nonneg = true;
    noisy_runs = solve_trials(spec, bench::SolverId::gspa, cfg);
    const Stats s = stats_of(noisy_runs);
    Outcome o;
    o.pass = s.mean_residual >= 0.09 && s.mean_residual <= 0.19 && s.mean_linf <= 0.01;
    o.detail = "mean residual " + fmt(s.mean_residual) + " (band [0.09,0.19]), mean linf " +
               fmt(s.mean_linf) + " (<= 0.01)";
    return o;
  });

  // 6. Final-iterate certification at tol 1e-6.
  suite.run(6, "final-iterate alpha-stationarity certificates", [&] {
    struct Source {
      const char* name;
      const std::vector<Run>* runs;
    };
    const Source sources[] = {{"c3", &fixed_runs}, {"c4", &b_gspa}, {"c5", &noisy_runs}};
    int checked = 0, passed = 0;
    double worst_margin = 0.0;
    for (const auto& src : sources) {
      for (const Run& run : *src.runs) {
        if (run.result.status != SolveStatus::converged_epsilon) continue;
        if (run.result.trace.empty()) continue;
        ++checked;
        const double alpha = run.result.trace.back().alpha;
        try {
          const auto check = check_alpha_stationary(run.inst, run.result.x_final, alpha, 1e-6);
          worst_margin = std::max(worst_margin, check.worst_violation);
          if (check.stationary) ++passed;
        } catch (const InfeasiblePoint&) {
          // counts as a failed certificate
        }
      }
    }

    // Context for the failure analysis: the same certificate on runs whose
    // stopping tolerance is pushed below alpha * tol.
    SolverConfig tight = paper_cfg;
    tight.nonneg = true;
    tight.epsilon = 1e-10;
    const auto spec = paper_spec(true, 0.0, 23);
    int tight_pass = 0;
    for (int t = 0; t < 3; ++t) {
      const auto inst = bench::gen_instance(spec, t);
      const auto res = gspa_solve(inst, tight);
      if (res.status == SolveStatus::converged_epsilon &&
          check_alpha_stationary(inst, res.x_final, res.trace.back().alpha, 1e-6)
              .stationary)
        ++tight_pass;
    }

    Outcome o;
    o.pass = checked > 0 && passed == checked;
    o.detail = std::to_string(passed) + "/" + std::to_string(checked) +
               " converged runs certified at tol 1e-6 (worst on/off-support margin " +
               fmt(worst_margin) +
               "); note: with eps = 1e-10 the same certificate passes " +
               std::to_string(tight_pass) + "/3 paper-scale runs";
    return o;
  });

  // 7. Stationarity-theory consistency.
  suite.run(7, "stationarity implication chain", [] {
    int points = 0, alpha_hits = 0;
    int chain_violations = 0, equality_violations = 0, full_support_violations = 0;
    const double tol = 1e-8;
    const double alphas[] = {0.5, 1.0, 2.0};

    bench::ExperimentSpec spec;
    spec.n = 30;
    spec.m_rule = bench::MRule::given(12);
    spec.s_rule = bench::SRule::given(4);
    spec.nonneg = true;
    spec.trials = 350;
    spec.base_seed = 4000;
    spec.solvers = {bench::SolverId::gspa};

    SolverConfig cfg;
    cfg.nonneg = true;
    cfg.epsilon = 1e-12;

    SplitMix64 rng(424242);
    for (int t = 0; t < spec.trials; ++t) {
      const auto inst = bench::gen_instance(spec, t);
      const auto res = gspa_solve(inst, cfg);

      Vector perturbed = res.x_final;
      bool moved = false;
      for (Index i = 0; i < perturbed.size(); ++i) {
        if (perturbed[i] != 0.0) {
          perturbed[i] += 0.25 + 0.5 * rng.uniform01();
          moved = true;
          break;
        }
      }
      if (!moved) perturbed[static_cast<Index>(rng.below(30))] = 1.0;
      perturbed = project_sparse_nonneg(perturbed, inst.s);

      const Vector candidates[] = {res.x_final, *inst.x_orig, perturbed};
      for (const Vector& x : candidates) {
        const double alpha = alphas[points % 3];
        ++points;
        const bool a = check_alpha_stationary(inst, x, alpha, tol).stationary;
        const bool nb = check_sparsity_stationarity(inst, x, StationarityVariant::NB, tol);
        const bool tb = check_sparsity_stationarity(inst, x, StationarityVariant::TB, tol);
        const bool nc = check_sparsity_stationarity(inst, x, StationarityVariant::NC, tol);
        const bool tc = check_sparsity_stationarity(inst, x, StationarityVariant::TC, tol);
        if (a) {
          ++alpha_hits;
          if (!(nc && tc)) ++chain_violations;
        }
        if (nc != tc) ++equality_violations;
        if (l0_norm(x, tol) == inst.s && !(nb == tb && tb == nc))
          ++full_support_violations;
      }
    }
    Outcome o;
    o.pass = chain_violations == 0 && equality_violations == 0 &&
             full_support_violations == 0 && points >= 1000 && alpha_hits > 0;
    o.detail = std::to_string(points) + " points (" + std::to_string(alpha_hits) +
               " alpha-stationary), violations: chain " + std::to_string(chain_violations) +
               ", NC<->TC " + std::to_string(equality_violations) + ", full-support " +
               std::to_string(full_support_violations);
    return o;
  });

  // 8. s-regularity and second-order certificates.
  suite.run(8, "s-regularity and strict second-order", [] {
    int regular = 0, second_order = 0;
    const int total = 20;
    SolverConfig cfg;
    cfg.nonneg = true;
    for (int t = 0; t < total; ++t) {
      bench::ExperimentSpec spec;
      spec.n = 6;
      spec.m_rule = bench::MRule::given(4);
      spec.s_rule = bench::SRule::given(3);
      spec.nonneg = true;
      spec.trials = 1;
      spec.base_seed = 8000 + static_cast<std::uint64_t>(t);
      spec.solvers = {bench::SolverId::gspa};
      const auto inst = bench::gen_instance(spec, 0);

      if (check_s_regular(inst.A, inst.s, 1e-10)) ++regular;
      const auto res = gspa_solve(inst, cfg);
      if (check_second_order(inst, res.x_final, /*strict=*/true, 1e-8).satisfied)
        ++second_order;
    }
    Outcome o;
    o.pass = regular == total && second_order == total;
    o.detail = "s-regular " + std::to_string(regular) + "/20, strict second-order " +
               std::to_string(second_order) + "/20";
    return o;
  });

  // 9. Baseline parity on exact recovery.
  suite.run(9, "baseline recovery parity", [&] {
    const Stats sn = stats_of(c_niht);
    const Stats sc = stats_of(c_cosamp);
    const Stats sp = stats_of(c_sp);
    Outcome o;
    o.pass = sn.success >= 0.90 && sc.success >= 0.90 && sp.success >= 0.90;
    o.detail = "success niht " + fmt(100 * sn.success) + "%, cosamp " +
               fmt(100 * sc.success) + "%, sp " + fmt(100 * sp.success) + "%";
    return o;
  });

  // 10. Relative speed.
  suite.run(10, "gspa at least as fast as niht", [&] {
    const Stats sg = stats_of(b_gspa);
    const Stats sn = stats_of(b_niht);
    const Stats cg = stats_of(c_gspa);
    const Stats cn = stats_of(c_niht);
    const Stats cc = stats_of(c_cosamp);
    const Stats cs = stats_of(c_sp);
    Outcome o;
    o.pass = sg.mean_wall_ms <= sn.mean_wall_ms;
    o.detail = "nonneg run: gspa " + fmt(sg.mean_wall_ms) + " ms vs niht " +
               fmt(sn.mean_wall_ms) + " ms; signed-run ratios vs gspa: niht " +
               fmt(cn.mean_wall_ms / cg.mean_wall_ms) + "x, cosamp " +
               fmt(cc.mean_wall_ms / cg.mean_wall_ms) + "x, sp " +
               fmt(cs.mean_wall_ms / cg.mean_wall_ms) + "x (reported, not gated)";
    return o;
  });

  // 11. Trace behavior.
  suite.run(11, "trace descent and vanishing steps", [&] {
    // Carry-forward mean residual over the criterion-4 nonneg runs.
    const int max_k = 100;
    std::vector<double> mean_res(max_k, 0.0);
    for (int k = 0; k < max_k; ++k) {
      double sum = 0.0;
      for (const Run& run : b_gspa) {
        const auto& tr = run.result.trace;
        const auto at = std::min<std::size_t>(static_cast<std::size_t>(k), tr.size() - 1);
        sum += tr[at].residual;
      }
      mean_res[static_cast<std::size_t>(k)] = sum / static_cast<double>(b_gspa.size());
    }
    bool non_increasing = true;
    for (int k = 1; k < max_k; ++k)
      if (mean_res[k] > mean_res[k - 1] + 1e-15) non_increasing = false;
    const double at30 = mean_res[29];

    // Vanishing steps over the last 10 recorded iterations of each converged run.
    int tail_ok = 0, converged = 0;
    double worst_ratio = 0.0;
    for (const Run& run : b_gspa) {
      if (run.result.status != SolveStatus::converged_epsilon) continue;
      ++converged;
      const auto& tr = run.result.trace;
      const std::size_t tail = std::min<std::size_t>(10, tr.size());
      bool ok = true;
      for (std::size_t i = tr.size() - tail; i < tr.size(); ++i) {
        const double ratio = tr[i].delta_norm / tr[i].alpha;
        worst_ratio = std::max(worst_ratio, ratio);
        if (!(ratio < 1e-6)) ok = false;
      }
      if (ok) ++tail_ok;
    }

    Outcome o;
    o.pass = non_increasing && at30 <= 1e-3 && converged > 0 && tail_ok == converged;
    o.detail = std::string("mean trace ") +
               (non_increasing ? "non-increasing" : "INCREASES") + ", at k=30: " +
               fmt(at30) + " (<= 1e-3 required); vanishing-step tail holds in " +
               std::to_string(tail_ok) + "/" + std::to_string(converged) +
               " converged runs (worst ratio " + fmt(worst_ratio) + ")";
    return o;
  });

  std::printf("%d/11 criteria passed\n", 11 - suite.failures);
  return suite.failures;
}
