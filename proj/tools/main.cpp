// Command-line front end: gen / solve / check / bench.
//
// Exit codes: 0 success (or alpha-stationary for `check`), 1 check-negative,
// 2 usage or validation failure, 3 solver hit max_iter, 4 solver stalled in
// backtracking.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sparsekit/bench.hpp"
#include "sparsekit/core.hpp"
#include "sparsekit/io.hpp"
#include "sparsekit/optimality.hpp"
#include "sparsekit/projections.hpp"
#include "sparsekit/solvers.hpp"

namespace {

using namespace sparsekit;

int bench_threads_from_env() {
  const char* env = std::getenv("SPARSEKIT_THREADS");
  if (!env) return 0;  // auto
  try {
    return std::max(0, std::stoi(env));
  } catch (...) {
    return 0;
  }
}

Alpha0Policy parse_alpha0(const std::string& text) {
  if (text == "adaptive") return Alpha0Policy::adaptive();
  if (text == "fixed") return Alpha0Policy::fixed_default();
  try {
    return Alpha0Policy::fixed(std::stod(text));
  } catch (...) {
    throw ContractViolation("--alpha0 expects 'adaptive' or a numeric value, got '" +
                            text + "'");
  }
}

bench::MRule parse_m_rule(const nlohmann::json& j) {
  if (j.is_number()) return bench::MRule::given(j.get<Index>());
  const auto s = j.get<std::string>();
  if (s == "half") return bench::MRule::half();
  if (s == "quarter") return bench::MRule::quarter();
  throw ContractViolation("m_rule must be 'half', 'quarter' or an integer");
}

bench::SRule parse_s_rule(const nlohmann::json& j) {
  if (j.is_number()) return bench::SRule::given(j.get<Index>());
  const auto s = j.get<std::string>();
  if (s == "pct1") return bench::SRule::pct1();
  if (s == "pct5") return bench::SRule::pct5();
  throw ContractViolation("s_rule must be 'pct1', 'pct5' or an integer");
}

std::vector<bench::SolverId> parse_solver_list(const std::vector<std::string>& names) {
  std::vector<bench::SolverId> out;
  for (const auto& name : names) {
    const auto id = bench::parse_solver(name);
    if (!id) throw ContractViolation("unknown solver '" + name + "'");
    out.push_back(*id);
  }
  return out;
}

int run_gen(Index n, Index m, Index s, bool nonneg, double sigma0, std::uint64_t seed,
            const std::string& out) {
  bench::ExperimentSpec spec;
  spec.n = n;
  spec.m_rule = bench::MRule::given(m);
  spec.s_rule = bench::SRule::given(s);
  spec.nonneg = nonneg;
  spec.sigma0 = sigma0;
  spec.trials = 1;
  spec.base_seed = seed;
  spec.solvers = {bench::SolverId::gspa};  // irrelevant to generation
  const ProblemInstance inst = bench::gen_instance(spec, 0);
  write_instance_file(out, inst);
  std::cout << "wrote " << out << " (m=" << m << " n=" << n << " s=" << s
            << " nonneg=" << (nonneg ? "true" : "false") << " sigma0=" << sigma0
            << ")\n";
  return 0;
}

int run_solve(const std::string& in, const std::string& algo, const std::string& alpha0,
              double beta, double sigma, double eps, int max_iter, int max_backtracks,
              const std::string& trace_path, const std::string& out_path) {
  const ProblemInstance inst = read_instance_file(in);
  const auto id = bench::parse_solver(algo);
  if (!id) throw ContractViolation("unknown solver '" + algo + "'");

  SolverConfig cfg;
  cfg.alpha0 = parse_alpha0(alpha0);
  cfg.beta = beta;
  cfg.sigma = sigma;
  cfg.epsilon = eps;
  cfg.max_iter = max_iter;
  cfg.max_backtracks = max_backtracks;
  cfg.nonneg = inst.nonneg;

  SolveResult result;
  switch (*id) {
    case bench::SolverId::gspa: result = gspa_solve(inst, cfg); break;
    case bench::SolverId::niht: result = niht_solve(inst, cfg); break;
    case bench::SolverId::cosamp: result = cosamp_solve(inst, cfg); break;
    case bench::SolverId::sp: result = sp_solve(inst, cfg); break;
  }

  if (!out_path.empty()) write_solve_result_file(out_path, result);
  if (!trace_path.empty()) {
    std::ofstream tf(trace_path);
    if (!tf) throw ContractViolation("cannot write file: " + trace_path);
    write_iteration_trace_csv(tf, result.trace);
  }

  const double residual = (inst.b - inst.A * result.x_final).norm();
  std::cout << "status=" << to_string(result.status) << " iterations=" << result.iterations
            << " residual=" << residual << " wall_time=" << result.wall_time << "s\n";
  if (out_path.empty()) std::cout << solve_result_to_json(result).dump(2) << '\n';

  switch (result.status) {
    case SolveStatus::converged_epsilon: return 0;
    case SolveStatus::max_iter: return 3;
    case SolveStatus::stalled_backtracking: return 4;
  }
  return 2;
}

int run_check(const std::string& in, const std::string& x_path, double alpha, double tol) {
  const ProblemInstance inst = read_instance_file(in);
  const Vector x = read_vector_file(x_path);
  const StationarityReport report = build_report(inst, x, alpha, tol);
  std::cout << report_to_json(report).dump(2) << '\n';
  return report.alpha_stationary ? 0 : 1;
}

int run_bench(const std::string& spec_path, std::optional<Index> n, const std::string& m_rule,
              std::optional<Index> m, const std::string& s_rule, std::optional<Index> s,
              bool nonneg, double sigma0, int trials, std::uint64_t seed,
              const std::vector<std::string>& solver_names, int max_k,
              const std::string& out_dir) {
  bench::ExperimentSpec spec;
  if (!spec_path.empty()) {
    std::ifstream in(spec_path);
    if (!in) throw ContractViolation("cannot open file: " + spec_path);
    nlohmann::json j;
    in >> j;
    spec.n = j.at("n").get<Index>();
    spec.m_rule = parse_m_rule(j.value("m_rule", nlohmann::json("quarter")));
    spec.s_rule = parse_s_rule(j.value("s_rule", nlohmann::json("pct5")));
    spec.nonneg = j.value("nonneg", false);
    spec.sigma0 = j.value("sigma0", 0.0);
    spec.trials = j.value("trials", 40);
    spec.base_seed = j.value("base_seed", std::uint64_t{1});
    if (j.contains("solvers"))
      spec.solvers = parse_solver_list(j.at("solvers").get<std::vector<std::string>>());
  } else {
    if (!n) throw ContractViolation("bench: provide --spec or --n");
    spec.n = *n;
    spec.m_rule = m ? bench::MRule::given(*m) : parse_m_rule(nlohmann::json(m_rule));
    spec.s_rule = s ? bench::SRule::given(*s) : parse_s_rule(nlohmann::json(s_rule));
    spec.nonneg = nonneg;
    spec.sigma0 = sigma0;
    spec.trials = trials;
    spec.base_seed = seed;
    if (!solver_names.empty()) spec.solvers = parse_solver_list(solver_names);
  }
  if (spec.solvers.empty()) {
    spec.solvers = {bench::SolverId::gspa, bench::SolverId::niht};
    if (!spec.nonneg) {
      spec.solvers.push_back(bench::SolverId::cosamp);
      spec.solvers.push_back(bench::SolverId::sp);
    }
  }
  spec.validate();  // exit 2 before any trial runs

  const auto out = bench::run_experiment_full(spec, max_k, bench_threads_from_env());

  std::filesystem::create_directories(out_dir);
  const auto write = [&](const std::string& name, auto&& fn) {
    const auto path = std::filesystem::path(out_dir) / name;
    std::ofstream f(path);
    if (!f) throw ContractViolation("cannot write file: " + path.string());
    fn(f);
  };
  write("results.csv", [&](std::ostream& f) {
    bench::write_results_csv(f, spec, out.experiment.per_trial);
  });
  write("aggregate.csv", [&](std::ostream& f) {
    bench::write_aggregate_csv(f, out.experiment.aggregate);
  });
  write("trace.csv", [&](std::ostream& f) { bench::write_bench_trace_csv(f, out.trace); });

  bench::print_aggregate_table(std::cout, out.experiment.aggregate);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparsekit: solvers and certificates for sparse nonnegative "
               "affine feasibility"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "generate a random instance file");
  Index g_n = 0, g_m = 0, g_s = 0;
  bool g_nonneg = false;
  double g_sigma0 = 0.0;
  std::uint64_t g_seed = 1;
  std::string g_out;
  gen->add_option("--n", g_n, "signal length N")->required();
  gen->add_option("--m", g_m, "measurement count M")->required();
  gen->add_option("--s", g_s, "sparsity budget")->required();
  gen->add_flag("--nonneg", g_nonneg, "nonnegative ground truth and model");
  gen->add_option("--sigma0", g_sigma0, "noise standard deviation");
  gen->add_option("--seed", g_seed, "generator seed");
  gen->add_option("--out", g_out, "output instance JSON")->required();

  auto* solve = app.add_subcommand("solve", "run one solver on an instance file");
  std::string s_in, s_algo = "gspa", s_alpha0 = "adaptive", s_trace, s_out;
  double s_beta = 0.8, s_sigma = 1e-5, s_eps = 1e-6;
  int s_max_iter = 5000, s_max_backtracks = 100;
  solve->add_option("--in", s_in, "instance JSON")->required();
  solve->add_option("--algo", s_algo, "gspa | niht | cosamp | sp");
  solve->add_option("--alpha0", s_alpha0, "'adaptive', 'fixed' (0.99/l_r) or a value");
  solve->add_option("--beta", s_beta, "backtracking shrink factor");
  solve->add_option("--sigma", s_sigma, "sufficient-decrease constant");
  solve->add_option("--eps", s_eps, "stopping tolerance on ||dx||");
  solve->add_option("--max-iter", s_max_iter, "iteration cap");
  solve->add_option("--max-backtracks", s_max_backtracks, "backtracking cap");
  solve->add_option("--trace", s_trace, "write per-iteration CSV here");
  solve->add_option("--out", s_out, "write result JSON here");

  auto* check = app.add_subcommand("check", "stationarity certificates for a point");
  std::string c_in, c_x;
  double c_alpha = 1.0, c_tol = 1e-8;
  check->add_option("--in", c_in, "instance JSON")->required();
  check->add_option("--x", c_x, "candidate point, JSON array")->required();
  check->add_option("--alpha", c_alpha, "step size in the fixed-point test");
  check->add_option("--tol", c_tol, "tolerance for every inequality");

  auto* bench_cmd = app.add_subcommand("bench", "multi-trial experiment with CSV output");
  std::string b_spec, b_m_rule = "quarter", b_s_rule = "pct5", b_out_dir = ".";
  std::optional<Index> b_n, b_m, b_s;
  bool b_nonneg = false;
  double b_sigma0 = 0.0;
  int b_trials = 40, b_max_k = 100;
  std::uint64_t b_seed = 1;
  std::vector<std::string> b_solvers;
  bench_cmd->add_option("--spec", b_spec, "experiment spec JSON (overrides flags)");
  bench_cmd->add_option("--n", b_n, "signal length N");
  bench_cmd->add_option("--m-rule", b_m_rule, "half | quarter");
  bench_cmd->add_option("--m", b_m, "explicit M (overrides --m-rule)");
  bench_cmd->add_option("--s-rule", b_s_rule, "pct1 | pct5");
  bench_cmd->add_option("--s", b_s, "explicit s (overrides --s-rule)");
  bench_cmd->add_flag("--nonneg", b_nonneg, "nonnegative model");
  bench_cmd->add_option("--sigma0", b_sigma0, "noise standard deviation");
  bench_cmd->add_option("--trials", b_trials, "trial count");
  bench_cmd->add_option("--seed", b_seed, "base seed");
  bench_cmd->add_option("--solvers", b_solvers, "subset of gspa,niht,cosamp,sp")
      ->delimiter(',');
  bench_cmd->add_option("--max-k", b_max_k, "iterations covered by trace.csv");
  bench_cmd->add_option("--out-dir", b_out_dir, "directory for the CSVs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed())
      return run_gen(g_n, g_m, g_s, g_nonneg, g_sigma0, g_seed, g_out);
    if (solve->parsed())
      return run_solve(s_in, s_algo, s_alpha0, s_beta, s_sigma, s_eps, s_max_iter,
                       s_max_backtracks, s_trace, s_out);
    if (check->parsed()) return run_check(c_in, c_x, c_alpha, c_tol);
    if (bench_cmd->parsed())
      return run_bench(b_spec, b_n, b_m_rule, b_m, b_s_rule, b_s, b_nonneg, b_sigma0,
                       b_trials, b_seed, b_solvers, b_max_k, b_out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
