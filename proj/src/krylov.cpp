#include "soraslab/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace soras {

std::pair<Vector, SolveReport> gmres_right(const LinOp& A, const LinOp& M_inv,
                                           std::span<const double> b,
                                           std::span<const double> x0, double tol, int maxit,
                                           std::vector<Vector>* basis_out) {
  const std::size_t n = A.rows;
  if (A.cols != n || M_inv.rows != n || M_inv.cols != n || b.size() != n || x0.size() != n)
    throw std::invalid_argument("gmres_right: dimension mismatch");
  if (maxit < 1) throw std::invalid_argument("gmres_right: maxit must be >= 1");

  SolveReport report;
  Vector x(x0.begin(), x0.end());

  Vector r = A(x0);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  const double beta = nrm2(r);
  if (beta == 0.0) {
    report.converged = true;
    report.residual_history = {0.0};
    return {x, report};
  }

  std::vector<Vector> V;
  V.push_back(r);
  scal(1.0 / beta, V[0]);

  std::vector<Vector> H;       // H[k] holds column k, k+2 entries
  Vector cs, sn, g{beta};      // Givens rotations and rotated rhs
  Vector tmp(n), w(n);
  report.residual_history.push_back(1.0);

  int k = 0;
  bool breakdown = false;
  for (; k < maxit; ++k) {
    M_inv.apply(V[k], tmp);
    A.apply(tmp, w);

    Vector h(k + 2, 0.0);
    for (int i = 0; i <= k; ++i) {
      h[i] = dot(w, V[i]);
      axpy(-h[i], V[i], w);
    }
    h[k + 1] = nrm2(w);

    for (int i = 0; i < k; ++i) {
      const double t = cs[i] * h[i] + sn[i] * h[i + 1];
      h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
      h[i] = t;
    }
    const double rr = std::hypot(h[k], h[k + 1]);
    cs.push_back(rr == 0.0 ? 1.0 : h[k] / rr);
    sn.push_back(rr == 0.0 ? 0.0 : h[k + 1] / rr);
    g.push_back(-sn[k] * g[k]);
    g[k] *= cs[k];
    const double hk1 = h[k + 1];
    h[k + 1] = 0.0;
    h[k] = rr;
    H.push_back(std::move(h));

    const double rel = std::abs(g[k + 1]) / beta;
    report.residual_history.push_back(rel);

    breakdown = hk1 <= 1e-14 * rr;
    if (rel <= tol || breakdown || k + 1 == maxit) break;

    Vector v = w;
    scal(1.0 / hk1, v);
    V.push_back(std::move(v));
  }
  report.iterations = std::min(k + 1, maxit);
  report.converged = report.residual_history.back() <= tol || breakdown;

  // back substitution on the rotated Hessenberg system
  const int m = report.iterations;
  Vector y(m, 0.0);
  for (int i = m - 1; i >= 0; --i) {
    double s = g[i];
    for (int j = i + 1; j < m; ++j) s -= H[j][i] * y[j];
    y[i] = s / H[i][i];
  }
  Vector u(n, 0.0);
  for (int i = 0; i < m; ++i) axpy(y[i], V[i], u);
  M_inv.apply(u, tmp);
  for (std::size_t i = 0; i < n; ++i) x[i] += tmp[i];

  A.apply(x, w);
  for (std::size_t i = 0; i < n; ++i) w[i] = b[i] - w[i];
  report.final_true_residual = nrm2(w) / beta;

  if (basis_out) *basis_out = V;
  return {x, report};
}

Vector random_initial_guess(std::size_t n, std::uint64_t seed) {
  Vector x(n);
  std::uint64_t state = seed;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    x[i] = 2.0 * ((z >> 11) * 0x1.0p-53) - 1.0;
  }
  return x;
}

}  // namespace soras
