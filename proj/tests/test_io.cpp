#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "sparsekit/bench.hpp"
#include "sparsekit/io.hpp"
#include "sparsekit/optimality.hpp"
#include "test_support.hpp"

using namespace sparsekit;
using namespace sparsekit::testing;
namespace fs = std::filesystem;

TEST_CASE("instance json round trip is exact") {
  bench::ExperimentSpec spec;
  spec.n = 20;
  spec.m_rule = bench::MRule::given(8);
  spec.s_rule = bench::SRule::given(3);
  spec.nonneg = true;
  spec.sigma0 = 0.125;
  spec.trials = 1;
  spec.base_seed = 77;
  spec.solvers = {bench::SolverId::gspa};
  const auto inst = bench::gen_instance(spec, 0);

  const auto j = instance_to_json(inst);
  const auto back = instance_from_json(j);
  CHECK(back.A == inst.A);
  CHECK(back.b == inst.b);
  CHECK(*back.x_orig == *inst.x_orig);
  CHECK(back.s == inst.s);
  CHECK(back.nonneg == inst.nonneg);
  CHECK(back.sigma0 == inst.sigma0);
  CHECK(back.seed == inst.seed);

  // Serializing again produces identical text (doubles round-trip).
  CHECK(instance_to_json(back).dump() == j.dump());
}

TEST_CASE("instance json validates its fields") {
  auto j = instance_to_json(identity_instance(vec({1, 2}), 1));
  j["a"] = std::vector<double>{1, 2, 3};  // wrong length
  CHECK_THROWS_AS(instance_from_json(j), ContractViolation);

  auto j2 = instance_to_json(identity_instance(vec({1, 2}), 1));
  j2["x_orig"] = std::vector<double>{1, 1};  // denser than s
  CHECK_THROWS_AS(instance_from_json(j2), ContractViolation);

  CHECK_THROWS_AS(read_instance_file("/nonexistent/path.json"), ContractViolation);
}

TEST_CASE("report json carries every field") {
  const auto inst = identity_instance(vec({1, 2}), 1, true);
  const auto rep = build_report(inst, vec({0, 2}), 1.0, 1e-8);
  const auto j = report_to_json(rep);
  for (const char* key :
       {"alpha_stationary", "nb_stationary", "tb_stationary", "nc_stationary",
        "tc_stationary", "restricted_grad_norm", "worst_violation", "support_size",
        "alpha_used", "tol_used"})
    CHECK(j.contains(key));
  CHECK(j["alpha_stationary"] == true);
  CHECK(j["support_size"] == 1);
}

TEST_CASE("vector file reader") {
  const auto path = (fs::temp_directory_path() / "sparsekit_io_vec.json").string();
  {
    std::ofstream out(path);
    out << "[1.5, -2.0, 0.0]";
  }
  const Vector v = read_vector_file(path);
  REQUIRE(v.size() == 3);
  CHECK(v[0] == 1.5);
  CHECK(v[1] == -2.0);
  std::remove(path.c_str());

  {
    std::ofstream out(path);
    out << "{\"not\": \"an array\"}";
  }
  CHECK_THROWS_AS(read_vector_file(path), ContractViolation);
  std::remove(path.c_str());
}
