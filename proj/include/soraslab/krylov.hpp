#pragma once
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "soraslab/linalg.hpp"

namespace soras {

struct SolveReport {
  int iterations = 0;
  // relative residuals ||b - A x_k|| / ||b - A x0||, starting at 1.0
  std::vector<double> residual_history;
  bool converged = false;
  double final_true_residual = 0.0;  // recomputed from x, same normalization
};

/// Full (non-restarted) GMRES on A M^{-1} y = b with modified Gram-Schmidt
/// Arnoldi and Givens rotations; returns x = x0 + M^{-1} V y. A vanishing
/// Arnoldi residual (happy breakdown) counts as exact convergence. When
/// basis_out is given, the orthonormal basis vectors are copied into it.
std::pair<Vector, SolveReport> gmres_right(const LinOp& A, const LinOp& M_inv,
                                           std::span<const double> b,
                                           std::span<const double> x0, double tol = 1e-6,
                                           int maxit = 1000,
                                           std::vector<Vector>* basis_out = nullptr);

// Uniform [-1, 1] entries from splitmix64 (increment 0x9e3779b97f4a7c15,
// mix constants 0xbf58476d1ce4e5b9 / 0x94d049bb133111eb, shifts 30/27/31);
// the same seed always reproduces the same vector on every platform.
Vector random_initial_guess(std::size_t n, std::uint64_t seed);

}  // namespace soras
