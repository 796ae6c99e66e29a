#include "sparsekit/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

#include "sparsekit/core.hpp"
#include "sparsekit/rng.hpp"

namespace sparsekit::bench {

namespace {

constexpr double kSuccessLinf = 1e-5;

SolveResult dispatch(SolverId id, const ProblemInstance& inst, const SolverConfig& cfg) {
  switch (id) {
    case SolverId::gspa: return gspa_solve(inst, cfg);
    case SolverId::niht: return niht_solve(inst, cfg);
    case SolverId::cosamp: return cosamp_solve(inst, cfg);
    case SolverId::sp: return sp_solve(inst, cfg);
  }
  throw ContractViolation("unknown solver id");
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string fmt_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17e", v);
  return buf;
}

}  // namespace

const char* to_string(SolverId id) {
  switch (id) {
    case SolverId::gspa: return "gspa";
    case SolverId::niht: return "niht";
    case SolverId::cosamp: return "cosamp";
    case SolverId::sp: return "sp";
  }
  return "unknown";
}

std::optional<SolverId> parse_solver(std::string_view name) {
  if (name == "gspa") return SolverId::gspa;
  if (name == "niht") return SolverId::niht;
  if (name == "cosamp") return SolverId::cosamp;
  if (name == "sp") return SolverId::sp;
  return std::nullopt;
}

Index ExperimentSpec::derived_m() const {
  switch (m_rule.kind) {
    case MRule::Kind::half: return n / 2;
    case MRule::Kind::quarter: return n / 4;
    case MRule::Kind::given: return m_rule.value;
  }
  return 0;
}

Index ExperimentSpec::derived_s() const {
  switch (s_rule.kind) {
    case SRule::Kind::pct1: return std::max<Index>(1, n / 100);
    case SRule::Kind::pct5: return std::max<Index>(1, n / 20);
    case SRule::Kind::given: return s_rule.value;
  }
  return 0;
}

void ExperimentSpec::validate() const {
  const Index m = derived_m();
  const Index s = derived_s();
  if (n < 1) throw ContractViolation("experiment: n must be positive");
  if (!(s >= 1 && s < m && m < n))
    throw ContractViolation("experiment: require 1 <= s < M < N, got s=" +
                            std::to_string(s) + " M=" + std::to_string(m) +
                            " N=" + std::to_string(n));
  if (trials < 1) throw ContractViolation("experiment: trials must be >= 1");
  if (sigma0 < 0) throw ContractViolation("experiment: sigma0 must be nonnegative");
  if (solvers.empty()) throw ContractViolation("experiment: no solvers requested");
  if (nonneg) {
    for (SolverId id : solvers) {
      if (id == SolverId::cosamp || id == SolverId::sp)
        throw UnsupportedConfig(std::string("experiment: ") + to_string(id) +
                                " does not support the nonnegative constraint");
    }
  }
}

ProblemInstance gen_instance(const ExperimentSpec& spec, int trial_index) {
  spec.validate();
  const Index m = spec.derived_m();
  const Index n = spec.n;
  const Index s = spec.derived_s();
  const std::uint64_t stream_seed =
      spec.base_seed + static_cast<std::uint64_t>(trial_index);
  SplitMix64 rng(stream_seed);

  // Draw order is part of the file contract: support, signal entries,
  // matrix rows, then noise. See README, "Determinism".
  const std::vector<Index> perm = fisher_yates_permutation(n, rng);
  Vector x_orig = Vector::Zero(n);
  for (Index j = 0; j < s; ++j) {
    const double z = rng.normal();
    x_orig[perm[static_cast<std::size_t>(j)]] = spec.nonneg ? std::abs(z) : z;
  }

  ProblemInstance inst;
  inst.A.resize(m, n);
  for (Index r = 0; r < m; ++r)
    for (Index c = 0; c < n; ++c) inst.A(r, c) = rng.normal();

  inst.b = inst.A * x_orig;
  if (spec.sigma0 > 0.0) {
    for (Index i = 0; i < m; ++i) inst.b[i] += spec.sigma0 * rng.normal();
  }
  inst.s = s;
  inst.nonneg = spec.nonneg;
  inst.sigma0 = spec.sigma0;
  inst.x_orig = std::move(x_orig);
  inst.seed = stream_seed;
  return inst;
}

FullOutput run_experiment_full(const ExperimentSpec& spec, int max_k, int threads) {
  spec.validate();
  if (max_k < 1) throw ContractViolation("experiment: max_k must be >= 1");

  SolverConfig cfg;  // adaptive step, beta 0.8, sigma 1e-5, eps 1e-6, 5000 iters
  cfg.nonneg = spec.nonneg;

  const auto n_solvers = spec.solvers.size();
  const auto n_tasks = n_solvers * static_cast<std::size_t>(spec.trials);
  std::vector<TrialRecord> records(n_tasks);
  std::vector<std::vector<double>> residual_history(n_tasks);

  std::atomic<std::size_t> cursor{0};
  const auto worker = [&] {
    for (std::size_t task = cursor.fetch_add(1); task < n_tasks;
         task = cursor.fetch_add(1)) {
      const SolverId id = spec.solvers[task / static_cast<std::size_t>(spec.trials)];
      const int trial = static_cast<int>(task % static_cast<std::size_t>(spec.trials));
      TrialRecord rec;
      rec.solver = id;
      rec.trial = trial;
      const ProblemInstance inst = gen_instance(spec, trial);
      try {
        const SolveResult sol = dispatch(id, inst, cfg);
        rec.status = sol.status;
        rec.failed = sol.status == SolveStatus::stalled_backtracking;
        rec.iters = sol.iterations;
        rec.residual = (inst.b - inst.A * sol.x_final).norm();
        rec.linf_err = (sol.x_final - *inst.x_orig).lpNorm<Eigen::Infinity>();
        rec.wall_ms = sol.wall_time * 1e3;
        auto& hist = residual_history[task];
        hist.reserve(sol.trace.size());
        for (const IterationRecord& r : sol.trace) hist.push_back(r.residual);
      } catch (const std::exception& e) {
        rec.failed = true;
        rec.error = e.what();
        rec.iters = 0;
        rec.residual = std::numeric_limits<double>::quiet_NaN();
        rec.linf_err = std::numeric_limits<double>::quiet_NaN();
        rec.wall_ms = std::numeric_limits<double>::quiet_NaN();
      }
      records[task] = std::move(rec);
    }
  };

  const int n_workers = std::min<int>(resolve_threads(threads), static_cast<int>(n_tasks));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  FullOutput out;
  out.experiment.per_trial = records;

  for (std::size_t si = 0; si < n_solvers; ++si) {
    AggregateRow row;
    row.solver = spec.solvers[si];
    row.n = spec.n;
    row.m = spec.derived_m();
    row.s = spec.derived_s();
    row.sigma0 = spec.sigma0;
    row.trials = spec.trials;

    double sum_res = 0, sum_linf = 0, sum_wall = 0, sum_iters = 0;
    int ok = 0, successes = 0;
    for (int t = 0; t < spec.trials; ++t) {
      const TrialRecord& rec = records[si * static_cast<std::size_t>(spec.trials) +
                                       static_cast<std::size_t>(t)];
      if (rec.failed) continue;
      ++ok;
      sum_res += rec.residual;
      sum_linf += rec.linf_err;
      sum_wall += rec.wall_ms;
      sum_iters += rec.iters;
      if (rec.linf_err <= kSuccessLinf) ++successes;
    }
    row.valid_trials = ok;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.mean_residual = ok ? sum_res / ok : nan;
    row.mean_linf = ok ? sum_linf / ok : nan;
    row.mean_wall_ms = ok ? sum_wall / ok : nan;
    row.mean_iters = ok ? sum_iters / ok : nan;
    row.success_rate = static_cast<double>(successes) / spec.trials;
    out.experiment.aggregate.push_back(row);

    // Per-iteration mean residual, carrying each trial's final residual
    // forward so every curve is defined on the whole grid.
    for (int k = 1; k <= max_k; ++k) {
      double sum = 0;
      int cnt = 0;
      for (int t = 0; t < spec.trials; ++t) {
        const std::size_t task = si * static_cast<std::size_t>(spec.trials) +
                                 static_cast<std::size_t>(t);
        const auto& hist = residual_history[task];
        if (records[task].failed || hist.empty()) continue;
        const std::size_t at = std::min<std::size_t>(static_cast<std::size_t>(k) - 1,
                                                     hist.size() - 1);
        sum += hist[at];
        ++cnt;
      }
      out.trace.push_back({row.solver, k, cnt ? sum / cnt : nan});
    }
  }
  return out;
}

ExperimentOutput run_experiment(const ExperimentSpec& spec, int threads) {
  return run_experiment_full(spec, 1, threads).experiment;
}

std::vector<TraceRow> trace_experiment(const ExperimentSpec& spec, int max_k, int threads) {
  return run_experiment_full(spec, max_k, threads).trace;
}

void write_results_csv(std::ostream& os, const ExperimentSpec& spec,
                       const std::vector<TrialRecord>& records) {
  os << "solver,n,m,s,sigma0,trial,status,iters,residual,linf_err,wall_ms\n";
  for (const TrialRecord& r : records) {
    os << to_string(r.solver) << ',' << spec.n << ',' << spec.derived_m() << ','
       << spec.derived_s() << ',' << fmt_sci(spec.sigma0) << ',' << r.trial << ','
       << (r.error.empty() ? to_string(r.status) : "error") << ',' << r.iters << ','
       << fmt_sci(r.residual) << ',' << fmt_sci(r.linf_err) << ',' << fmt_sci(r.wall_ms)
       << '\n';
  }
}

void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows) {
  os << "solver,n,m,s,sigma0,trials,mean_residual,mean_linf,mean_wall_ms,mean_iters,"
        "success_rate\n";
  for (const AggregateRow& r : rows) {
    os << to_string(r.solver) << ',' << r.n << ',' << r.m << ',' << r.s << ','
       << fmt_sci(r.sigma0) << ',' << r.trials << ',' << fmt_sci(r.mean_residual) << ','
       << fmt_sci(r.mean_linf) << ',' << fmt_sci(r.mean_wall_ms) << ','
       << fmt_sci(r.mean_iters) << ',' << fmt_sci(r.success_rate) << '\n';
  }
}

void write_bench_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows) {
  os << "solver,k,mean_residual\n";
  for (const TraceRow& r : rows)
    os << to_string(r.solver) << ',' << r.k << ',' << fmt_sci(r.mean_residual) << '\n';
}

void print_aggregate_table(std::ostream& os, const std::vector<AggregateRow>& rows) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-8s %6s %6s %5s %9s %8s %12s %12s %12s %9s %8s\n",
                "solver", "n", "m", "s", "sigma0", "ok/all", "residual", "linf_err",
                "wall_ms", "iters", "success");
  os << buf;
  for (const AggregateRow& r : rows) {
    const auto cell = [&](double v, const char* fmt) {
      static thread_local char c[32];
      if (std::isnan(v)) return std::string("-- --");
      std::snprintf(c, sizeof(c), fmt, v);
      return std::string(c);
    };
    char okbuf[24];
    std::snprintf(okbuf, sizeof(okbuf), "%d/%d", r.valid_trials, r.trials);
    std::snprintf(buf, sizeof(buf), "%-8s %6lld %6lld %5lld %9.2e %8s %12s %12s %12s %9s %7.0f%%\n",
                  to_string(r.solver), static_cast<long long>(r.n),
                  static_cast<long long>(r.m), static_cast<long long>(r.s), r.sigma0,
                  okbuf, cell(r.mean_residual, "%.4e").c_str(),
                  cell(r.mean_linf, "%.4e").c_str(), cell(r.mean_wall_ms, "%.3f").c_str(),
                  cell(r.mean_iters, "%.1f").c_str(), 100.0 * r.success_rate);
    os << buf;
  }
}

}  // namespace sparsekit::bench
