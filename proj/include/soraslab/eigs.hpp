#pragma once
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>

#include "soraslab/linalg.hpp"

namespace soras {

/// Eigenvalues ascending; eigenvector k is the k-th column of vectors.
struct JacobiResult {
  Vector eigenvalues;
  DenseMatrix vectors;
};

// Cyclic Jacobi for dense symmetric matrices. Throws on asymmetric input.
JacobiResult jacobi_eig_sym(const DenseMatrix& A);

// Lower Cholesky factor of a symmetric positive definite matrix.
// Throws std::runtime_error on a non-positive pivot.
DenseMatrix cholesky(const DenseMatrix& A);

struct LanczosOptions {
  int max_iter = 300;
  double tol = 1e-10;
  bool want_vectors = false;
  bool max_only = false;             // converge only the upper extreme
  std::span<const double> start{};   // warm start; seeded vector if empty
  std::uint64_t seed = 0x5eed;
};

struct LanczosResult {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  Vector vec_min, vec_max;
  int iterations = 0;
  bool converged = false;
};

class LanczosError : public std::runtime_error {
 public:
  LanczosError(const std::string& msg, double lmin, double lmax)
      : std::runtime_error(msg), lambda_min(lmin), lambda_max(lmax) {}
  double lambda_min, lambda_max;
};

// Extreme Ritz values of a symmetric operator, full reorthogonalization.
// The operator must be symmetric; that is the caller's contract.
LanczosResult lanczos_extremes(const LinOp& op, const LanczosOptions& opts);

// Simple form: returns (lambda_min, lambda_max), throws LanczosError with
// the best estimates when max_iter is hit without convergence.
std::pair<double, double> lanczos_extremes(const LinOp& op, int max_iter, double tol);

}  // namespace soras
