#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "sparsekit/optimality.hpp"
#include "sparsekit/solvers.hpp"
#include "sparsekit/types.hpp"

namespace sparsekit {

// Instance JSON: {"m","n","s","nonneg","sigma0","seed"?,"a","b","x_orig"?}
// with "a" the row-major coefficient array. Doubles round-trip exactly.
nlohmann::json instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const nlohmann::json& j);

ProblemInstance read_instance_file(const std::string& path);
void write_instance_file(const std::string& path, const ProblemInstance& inst);

// Plain JSON array of numbers.
Vector read_vector_file(const std::string& path);

nlohmann::json report_to_json(const StationarityReport& report);

nlohmann::json solve_result_to_json(const SolveResult& result);
void write_solve_result_file(const std::string& path, const SolveResult& result);

}  // namespace sparsekit
