#include "sparsekit/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sparsekit/projections.hpp"
#include "sparsekit/rng.hpp"

namespace sparsekit {

namespace {

void require_dim(const ProblemInstance& inst, const Vector& x, const char* op) {
  if (x.size() != inst.n())
    throw ContractViolation(std::string(op) + ": x has length " +
                            std::to_string(x.size()) + ", expected " +
                            std::to_string(inst.n()));
}

}  // namespace

void ProblemInstance::validate(bool allow_degenerate) const {
  if (A.size() == 0) throw ContractViolation("instance: A is empty");
  if (s < 1) throw ContractViolation("instance: s must be positive");
  if (b.size() != m())
    throw ContractViolation("instance: b has length " + std::to_string(b.size()) +
                            ", expected " + std::to_string(m()));
  if (sigma0 < 0) throw ContractViolation("instance: sigma0 must be nonnegative");
  if (!allow_degenerate && !(s < m() && m() < n()))
    throw ContractViolation("instance: require s < M < N, got s=" + std::to_string(s) +
                            " M=" + std::to_string(m()) + " N=" + std::to_string(n()));
  if (x_orig) {
    if (x_orig->size() != n())
      throw ContractViolation("instance: x_orig has length " +
                              std::to_string(x_orig->size()) + ", expected " +
                              std::to_string(n()));
    if (l0_norm(*x_orig) > s)
      throw ContractViolation("instance: x_orig has more than s nonzeros");
    if (nonneg && x_orig->minCoeff() < 0)
      throw ContractViolation("instance: nonneg set but x_orig has a negative entry");
  }
}

bool SupportSet::contains(Index i) const {
  return std::binary_search(indices.begin(), indices.end(), i);
}

double objective(const ProblemInstance& inst, const Vector& x) {
  require_dim(inst, x, "objective");
  return 0.5 * (inst.A * x - inst.b).squaredNorm();
}

Vector gradient(const ProblemInstance& inst, const Vector& x) {
  require_dim(inst, x, "gradient");
  return inst.A.transpose() * (inst.A * x - inst.b);
}

SpectralInfo lipschitz_constant(const Matrix& A) {
  if (A.size() == 0) throw ContractViolation("lipschitz_constant: A is empty");

  constexpr double kRelTol = 1e-10;
  constexpr int kMaxIter = 1000;
  const Index n = A.cols();

  // The all-ones start can land in the null space of A^T A (e.g. A = [1 -1]);
  // fall back to a ramp, then to a seeded Gaussian vector.
  const auto start_vector = [n](int attempt) {
    Vector v(n);
    if (attempt == 0) {
      v.setOnes();
    } else if (attempt == 1) {
      for (Index i = 0; i < n; ++i) v[i] = static_cast<double>(i + 1);
    } else {
      SplitMix64 rng(0xA11CEULL);
      for (Index i = 0; i < n; ++i) v[i] = rng.normal();
    }
    return Vector(v / v.norm());
  };

  SpectralInfo info;
  for (int attempt = 0; attempt < 3; ++attempt) {
    Vector v = start_vector(attempt);
    double rayleigh = 0.0;
    bool have_prev = false;
    int used = 0;
    bool converged = false;
    bool degenerate = false;

    while (used < kMaxIter) {
      const Vector av = A * v;
      const Vector w = A.transpose() * av;
      const double rho = av.squaredNorm();  // v^T A^T A v with ||v|| = 1
      ++used;
      if (have_prev && std::abs(rho - rayleigh) <
                           kRelTol * std::max(std::abs(rayleigh),
                                              std::numeric_limits<double>::min())) {
        rayleigh = rho;
        converged = true;
        break;
      }
      rayleigh = rho;
      have_prev = true;
      const double wn = w.norm();
      if (wn == 0.0) {  // implies rho == 0: v lies in the null space
        degenerate = true;
        converged = true;
        break;
      }
      v = w / wn;
    }

    info.l_r = 1.01 * rayleigh;
    info.iterations_used = used;
    info.converged = converged;
    if (!degenerate) return info;
  }
  // Every start collapsed: A is the zero matrix.
  info.l_r = 0.0;
  info.converged = true;
  return info;
}

double kth_largest(const Vector& x, Index s, bool absolute) {
  if (s < 1 || s > x.size())
    throw ContractViolation("kth_largest: s must satisfy 1 <= s <= length(x)");
  std::vector<double> v(static_cast<std::size_t>(x.size()));
  for (Index i = 0; i < x.size(); ++i)
    v[static_cast<std::size_t>(i)] = absolute ? std::abs(x[i]) : x[i];
  std::nth_element(v.begin(), v.begin() + (s - 1), v.end(), std::greater<>());
  return v[static_cast<std::size_t>(s - 1)];
}

Vector brute_force_projection(const Vector& x, Index s, bool nonneg) {
  const Index n = x.size();
  if (n > 20)
    throw ContractViolation("brute_force_projection: N = " + std::to_string(n) +
                            " exceeds the enumeration guard (20)");
  if (s < 1 || s > n)
    throw ContractViolation("brute_force_projection: s must satisfy 1 <= s <= N");

  Vector best = Vector::Zero(n);
  double best_dist = x.squaredNorm();  // empty support

  std::vector<Index> chosen;
  const auto candidate_dist = [&](const std::vector<Index>& supp) {
    double d = 0.0;
    std::size_t pos = 0;
    for (Index i = 0; i < n; ++i) {
      if (pos < supp.size() && supp[pos] == i) {
        const double yi = nonneg ? std::max(x[i], 0.0) : x[i];
        d += (x[i] - yi) * (x[i] - yi);
        ++pos;
      } else {
        d += x[i] * x[i];
      }
    }
    return d;
  };

  // Depth-first extension visits supports in lexicographic order, so with a
  // strict improvement test ties keep the lexicographically smallest one.
  const auto visit = [&](auto&& self, Index from) -> void {
    for (Index i = from; i < n; ++i) {
      chosen.push_back(i);
      const double d = candidate_dist(chosen);
      if (d < best_dist) {
        best_dist = d;
        best = Vector::Zero(n);
        for (Index j : chosen) best[j] = nonneg ? std::max(x[j], 0.0) : x[j];
      }
      if (static_cast<Index>(chosen.size()) < s) self(self, i + 1);
      chosen.pop_back();
    }
  };
  visit(visit, 0);
  return best;
}

}  // namespace sparsekit
