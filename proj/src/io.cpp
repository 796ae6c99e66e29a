#include "sparsekit/io.hpp"

#include <fstream>

namespace sparsekit {

namespace {

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("cannot open file: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

void store_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ContractViolation("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

Vector vector_from_json(const nlohmann::json& arr, const char* what) {
  if (!arr.is_array()) throw ContractViolation(std::string(what) + " must be an array");
  Vector v(static_cast<Index>(arr.size()));
  Index i = 0;
  for (const auto& e : arr) v[i++] = e.get<double>();
  return v;
}

nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace

nlohmann::json instance_to_json(const ProblemInstance& inst) {
  nlohmann::json j;
  j["m"] = inst.m();
  j["n"] = inst.n();
  j["s"] = inst.s;
  j["nonneg"] = inst.nonneg;
  j["sigma0"] = inst.sigma0;
  if (inst.seed) j["seed"] = *inst.seed;
  nlohmann::json a = nlohmann::json::array();
  for (Index r = 0; r < inst.m(); ++r)
    for (Index c = 0; c < inst.n(); ++c) a.push_back(inst.A(r, c));
  j["a"] = std::move(a);
  j["b"] = vector_to_json(inst.b);
  if (inst.x_orig) j["x_orig"] = vector_to_json(*inst.x_orig);
  return j;
}

ProblemInstance instance_from_json(const nlohmann::json& j) {
  ProblemInstance inst;
  const auto m = j.at("m").get<Index>();
  const auto n = j.at("n").get<Index>();
  inst.s = j.at("s").get<Index>();
  inst.nonneg = j.value("nonneg", false);
  inst.sigma0 = j.value("sigma0", 0.0);
  if (j.contains("seed")) inst.seed = j.at("seed").get<std::uint64_t>();

  const auto& a = j.at("a");
  if (!a.is_array() || static_cast<Index>(a.size()) != m * n)
    throw ContractViolation("instance file: 'a' must hold m*n numbers");
  inst.A.resize(m, n);
  Index flat = 0;
  for (const auto& e : a) {
    inst.A(flat / n, flat % n) = e.get<double>();
    ++flat;
  }
  inst.b = vector_from_json(j.at("b"), "'b'");
  if (j.contains("x_orig")) inst.x_orig = vector_from_json(j.at("x_orig"), "'x_orig'");

  // Degenerate shapes (e.g. square identity test instances) are accepted on
  // read; strict s < M < N is the generator's business.
  inst.validate(/*allow_degenerate=*/true);
  return inst;
}

ProblemInstance read_instance_file(const std::string& path) {
  return instance_from_json(load_json(path));
}

void write_instance_file(const std::string& path, const ProblemInstance& inst) {
  store_json(path, instance_to_json(inst));
}

Vector read_vector_file(const std::string& path) {
  return vector_from_json(load_json(path), "vector file");
}

nlohmann::json report_to_json(const StationarityReport& report) {
  return nlohmann::json{
      {"alpha_stationary", report.alpha_stationary},
      {"nb_stationary", report.nb_stationary},
      {"tb_stationary", report.tb_stationary},
      {"nc_stationary", report.nc_stationary},
      {"tc_stationary", report.tc_stationary},
      {"restricted_grad_norm", report.restricted_grad_norm},
      {"worst_violation", report.worst_violation},
      {"support_size", report.support_size},
      {"alpha_used", report.alpha_used},
      {"tol_used", report.tol_used},
  };
}

nlohmann::json solve_result_to_json(const SolveResult& result) {
  nlohmann::json j;
  j["x_final"] = vector_to_json(result.x_final);
  j["status"] = to_string(result.status);
  j["iterations"] = result.iterations;
  j["wall_time"] = result.wall_time;
  if (!result.trace.empty()) {
    j["objective"] = result.trace.back().objective;
    j["residual"] = result.trace.back().residual;
  }
  j["safeguard_rejections"] = result.safeguard_rejections;
  j["ls_regularized_count"] = result.ls_regularized_count;
  return j;
}

void write_solve_result_file(const std::string& path, const SolveResult& result) {
  store_json(path, solve_result_to_json(result));
}

}  // namespace sparsekit
