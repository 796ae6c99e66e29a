#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "sparsekit/solvers.hpp"
#include "sparsekit/types.hpp"

namespace sparsekit::bench {

enum class SolverId { gspa, niht, cosamp, sp };

const char* to_string(SolverId id);
std::optional<SolverId> parse_solver(std::string_view name);

/// How M and s derive from N.
struct MRule {
  enum class Kind { half, quarter, given };
  Kind kind = Kind::quarter;
  Index value = 0;  // given only

  static MRule half() { return {Kind::half, 0}; }
  static MRule quarter() { return {Kind::quarter, 0}; }
  static MRule given(Index m) { return {Kind::given, m}; }
};

struct SRule {
  enum class Kind { pct1, pct5, given };
  Kind kind = Kind::pct5;
  Index value = 0;  // given only

  static SRule pct1() { return {Kind::pct1, 0}; }
  static SRule pct5() { return {Kind::pct5, 0}; }
  static SRule given(Index s) { return {Kind::given, s}; }
};

struct ExperimentSpec {
  Index n = 0;
  MRule m_rule;
  SRule s_rule;
  bool nonneg = false;
  double sigma0 = 0.0;
  int trials = 40;
  std::uint64_t base_seed = 1;
  std::vector<SolverId> solvers;

  Index derived_m() const;
  Index derived_s() const;
  void validate() const;  // throws ContractViolation / UnsupportedConfig
};

/// One (solver, trial) outcome. failed marks trials excluded from means:
/// stalled solves and thrown errors.
struct TrialRecord {
  SolverId solver = SolverId::gspa;
  int trial = 0;
  SolveStatus status = SolveStatus::max_iter;
  bool failed = false;
  std::string error;  // nonempty only for thrown errors
  int iters = 0;
  double residual = 0.0;
  double linf_err = 0.0;
  double wall_ms = 0.0;
};

struct AggregateRow {
  SolverId solver = SolverId::gspa;
  Index n = 0, m = 0, s = 0;
  double sigma0 = 0.0;
  int trials = 0;        // requested
  int valid_trials = 0;  // contributing to the means
  double mean_residual = 0.0;
  double mean_linf = 0.0;
  double mean_wall_ms = 0.0;
  double mean_iters = 0.0;
  double success_rate = 0.0;  // fraction of all trials with linf_err <= 1e-5
};

struct TraceRow {
  SolverId solver = SolverId::gspa;
  int k = 0;
  double mean_residual = 0.0;
};

/// Deterministic function of (spec, trial_index): a SplitMix64 stream seeded
/// with base_seed + trial_index drives support selection, signal entries,
/// the measurement matrix and the optional noise. See README, "Determinism".
ProblemInstance gen_instance(const ExperimentSpec& spec, int trial_index);

struct ExperimentOutput {
  std::vector<AggregateRow> aggregate;   // one row per requested solver
  std::vector<TrialRecord> per_trial;    // solver-major, trial-minor
};

/// Runs every requested solver on every trial instance with the standard
/// stopping rule (epsilon = 1e-6, max_iter = 5000). threads: 0 = one worker
/// per hardware thread, otherwise the worker count; metrics are independent
/// of the schedule, wall times are not.
ExperimentOutput run_experiment(const ExperimentSpec& spec, int threads = 1);

/// Mean residual per iteration k = 1..max_k across trials; trials that stop
/// early contribute their final residual to later k (carry-forward).
std::vector<TraceRow> trace_experiment(const ExperimentSpec& spec, int max_k = 100,
                                       int threads = 1);

/// Single engine behind run_experiment / trace_experiment, for callers that
/// want both without solving twice.
struct FullOutput {
  ExperimentOutput experiment;
  std::vector<TraceRow> trace;
};
FullOutput run_experiment_full(const ExperimentSpec& spec, int max_k, int threads);

// CSV writers. Full-precision scientific notation throughout.
void write_results_csv(std::ostream& os, const ExperimentSpec& spec,
                       const std::vector<TrialRecord>& records);
void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows);
void write_bench_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows);

/// Human-readable aggregate table; failed-trial cells print "--".
void print_aggregate_table(std::ostream& os, const std::vector<AggregateRow>& rows);

}  // namespace sparsekit::bench
