#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsekit {

// Dense double storage, row-major so the on-disk layout (see README) is a
// straight copy of the coefficient array.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// A caller broke an operation's contract (bad dimensions, out-of-range args).
struct ContractViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A candidate point handed to a stationarity checker is not feasible.
struct InfeasiblePoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A solver or command was asked for a combination it does not support.
struct UnsupportedConfig : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One problem x >= 0 (optional), ||x||_0 <= s, A x = b.
///
/// Immutable by convention: construct, validate, then share read-only.
struct ProblemInstance {
  Matrix A;      // M x N measurement matrix
  Vector b;      // length M
  Index s = 0;   // sparsity budget
  bool nonneg = false;
  double sigma0 = 0.0;  // noise level used at generation time
  std::optional<Vector> x_orig;  // ground truth, when known
  std::optional<std::uint64_t> seed;  // generator seed, when known

  Index m() const { return A.rows(); }
  Index n() const { return A.cols(); }

  // Throws ContractViolation unless s >= 1, b/x_orig have matching lengths,
  // x_orig is s-sparse (and nonnegative when nonneg is set), and, unless
  // allow_degenerate, s < M < N.
  void validate(bool allow_degenerate = false) const;
};

/// Ordered index set of nonzero coordinates.
struct SupportSet {
  std::vector<Index> indices;  // strictly increasing

  Index size() const { return static_cast<Index>(indices.size()); }
  bool empty() const { return indices.empty(); }
  bool contains(Index i) const;

  bool operator==(const SupportSet&) const = default;
};

/// Output of the largest-eigenvalue estimate for A^T A.
struct SpectralInfo {
  double l_r = 0.0;         // safeguarded estimate of lambda_max(A^T A)
  int iterations_used = 0;
  bool converged = false;
};

}  // namespace sparsekit
