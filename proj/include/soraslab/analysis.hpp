#pragma once
#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "soraslab/eigs.hpp"
#include "soraslab/linalg.hpp"
#include "soraslab/mesh.hpp"

namespace soras {

// Global ids of the non-Dirichlet nodes. Spectra and numerical ranges are
// computed on this block only: the unit diagonal rows left by Dirichlet
// elimination would otherwise contribute spurious eigenvalues at 1.
std::vector<int> interior_nodes(const Mesh& mesh);

// Dense matrix of `op` restricted to the index set `sub`, one operator
// apply per column.
DenseMatrix dense_restriction(const LinOp& op, const std::vector<int>& sub);

CsrMatrix csr_restriction(const CsrMatrix& A, const std::vector<int>& sub);

// Interior block of A * M^{-1} as a dense matrix.
DenseMatrix preconditioned_dense(const CsrMatrix& A, const LinOp& M_inv,
                                 const std::vector<int>& interior);

struct SpectrumReport {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::string method;  // "dense" or "lanczos"
  double delta_over_h = 0.0;  // descriptor, filled by the caller
  std::string pu;
};

/// Extreme eigenvalues of M^{-1}A in the symmetric positive definite
/// configuration, via the similarity transform L^T A L with the Cholesky
/// factor M^{-1} = L L^T on the interior block. Small blocks (n <= 400)
/// use the dense Jacobi eigensolver, larger ones Lanczos.
SpectrumReport preconditioned_spectrum_spd(const CsrMatrix& A, const LinOp& M_inv,
                                           const std::vector<int>& interior);

struct FovReport {
  // closed boundary polygon (re, im), upper half from the angle sweep and
  // the mirror image across the real axis appended
  std::vector<std::array<double, 2>> boundary;
  std::vector<double> support;  // support values for theta_k = k*pi/n_angles
  int n_angles = 64;
  std::string descriptor;

  double area() const;  // shoelace over the closed polygon
};

/// Boundary of the numerical range {z* P z : |z| = 1}: for each angle the
/// maximal eigenpair of the Hermitian part of e^{-i theta} P, computed by
/// Lanczos on its real 2n x 2n embedding with the previous angle's
/// eigenvector as the start vector.
FovReport fov_boundary(const DenseMatrix& P, int n_angles = 64);

void write_fov_csv(const FovReport& report, std::ostream& out);
void write_spectrum_csv(std::span<const SpectrumReport> reports, std::ostream& out);

}  // namespace soras
