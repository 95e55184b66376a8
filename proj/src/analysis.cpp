#include "soraslab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "soraslab/krylov.hpp"

namespace soras {

std::vector<int> interior_nodes(const Mesh& mesh) {
  std::vector<int> ids;
  for (int i = 0; i < mesh.node_count(); ++i)
    if (!mesh.boundary_node[i]) ids.push_back(i);
  return ids;
}

DenseMatrix dense_restriction(const LinOp& op, const std::vector<int>& sub) {
  const int m = static_cast<int>(sub.size());
  DenseMatrix out(m, m);
  Vector e(op.cols, 0.0), y(op.rows, 0.0);
  for (int j = 0; j < m; ++j) {
    e[sub[j]] = 1.0;
    op.apply(e, y);
    for (int i = 0; i < m; ++i) out.at(i, j) = y[sub[i]];
    e[sub[j]] = 0.0;
  }
  return out;
}

CsrMatrix csr_restriction(const CsrMatrix& A, const std::vector<int>& sub) {
  std::vector<int> pos(A.ncols, -1);
  for (std::size_t k = 0; k < sub.size(); ++k) pos[sub[k]] = static_cast<int>(k);
  CooBuilder coo(static_cast<int>(sub.size()), static_cast<int>(sub.size()));
  for (std::size_t i = 0; i < sub.size(); ++i) {
    const int gi = sub[i];
    for (int k = A.row_offsets[gi]; k < A.row_offsets[gi + 1]; ++k)
      if (pos[A.col_indices[k]] >= 0)
        coo.add(static_cast<int>(i), pos[A.col_indices[k]], A.values[k]);
  }
  return coo.compress();
}

DenseMatrix preconditioned_dense(const CsrMatrix& A, const LinOp& M_inv,
                                 const std::vector<int>& interior) {
  const DenseMatrix Minv = dense_restriction(M_inv, interior);
  const CsrMatrix A_int = csr_restriction(A, interior);
  const int m = Minv.nrows;
  DenseMatrix P(m, m);
  for (int i = 0; i < m; ++i) {
    auto pi = P.row(i);
    for (int k = A_int.row_offsets[i]; k < A_int.row_offsets[i + 1]; ++k) {
      const double aik = A_int.values[k];
      const auto mrow = Minv.row(A_int.col_indices[k]);
      for (int j = 0; j < m; ++j) pi[j] += aik * mrow[j];
    }
  }
  return P;
}

namespace {

// y = L x and y = L^T x for a dense lower-triangular factor
void lower_matvec(const DenseMatrix& L, std::span<const double> x, std::span<double> y) {
  const int n = L.nrows;
  for (int i = 0; i < n; ++i) {
    const auto row = L.row(i);
    double s = 0.0;
    for (int j = 0; j <= i; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

void lower_t_matvec(const DenseMatrix& L, std::span<const double> x, std::span<double> y) {
  const int n = L.nrows;
  std::fill(y.begin(), y.end(), 0.0);
  for (int i = 0; i < n; ++i) {
    const auto row = L.row(i);
    const double xi = x[i];
    for (int j = 0; j <= i; ++j) y[j] += row[j] * xi;
  }
}

}  // namespace

SpectrumReport preconditioned_spectrum_spd(const CsrMatrix& A, const LinOp& M_inv,
                                           const std::vector<int>& interior) {
  DenseMatrix Minv = dense_restriction(M_inv, interior);
  const int m = Minv.nrows;
  for (int i = 0; i < m; ++i)  // symmetrize away the rounding skew
    for (int j = i + 1; j < m; ++j) {
      const double v = 0.5 * (Minv.at(i, j) + Minv.at(j, i));
      Minv.at(i, j) = Minv.at(j, i) = v;
    }
  DenseMatrix L;
  try {
    L = cholesky(Minv);
  } catch (const std::exception&) {
    throw std::runtime_error(
        "preconditioned_spectrum_spd: preconditioner block is not positive definite");
  }
  const CsrMatrix A_int = csr_restriction(A, interior);

  SpectrumReport rep;
  if (m <= 400) {
    // dense L^T A L, then Jacobi
    DenseMatrix AL(m, m);
    Vector col(m), tmp(m);
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < m; ++i) col[i] = L.at(i, j);
      spmv(A_int, col, tmp);
      for (int i = 0; i < m; ++i) AL.at(i, j) = tmp[i];
    }
    DenseMatrix S(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int k = i; k < m; ++k) s += L.at(k, i) * AL.at(k, j);
        S.at(i, j) = s;
      }
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        const double v = 0.5 * (S.at(i, j) + S.at(j, i));
        S.at(i, j) = S.at(j, i) = v;
      }
    const JacobiResult jr = jacobi_eig_sym(S);
    rep.lambda_min = jr.eigenvalues.front();
    rep.lambda_max = jr.eigenvalues.back();
    rep.method = "dense";
  } else {
    LinOp sym{static_cast<std::size_t>(m), static_cast<std::size_t>(m),
              [&](std::span<const double> x, std::span<double> y) {
                Vector t1(m), t2(m);
                lower_matvec(L, x, t1);
                spmv(A_int, t1, t2);
                lower_t_matvec(L, t2, y);
              }};
    LanczosOptions opts;
    opts.max_iter = std::min(m, 500);
    opts.tol = 1e-9;
    const LanczosResult lr = lanczos_extremes(sym, opts);
    if (!lr.converged)
      throw LanczosError("preconditioned_spectrum_spd: Lanczos did not converge",
                         lr.lambda_min, lr.lambda_max);
    rep.lambda_min = lr.lambda_min;
    rep.lambda_max = lr.lambda_max;
    rep.method = "lanczos";
  }
  return rep;
}

double FovReport::area() const {
  double twice = 0.0;
  const std::size_t m = boundary.size();
  for (std::size_t k = 0; k < m; ++k) {
    const auto& p = boundary[k];
    const auto& q = boundary[(k + 1) % m];
    twice += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * std::abs(twice);
}

FovReport fov_boundary(const DenseMatrix& P, int n_angles) {
  if (P.nrows != P.ncols) throw std::invalid_argument("fov_boundary: matrix not square");
  if (n_angles < 2) throw std::invalid_argument("fov_boundary: need at least 2 angles");
  const int n = P.nrows;

  DenseMatrix Hr(n, n), Sk(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Hr.at(i, j) = 0.5 * (P.at(i, j) + P.at(j, i));
      Sk.at(i, j) = 0.5 * (P.at(i, j) - P.at(j, i));
    }

  FovReport rep;
  rep.n_angles = n_angles;
  rep.support.resize(n_angles + 1);
  std::vector<std::array<double, 2>> upper(n_angles + 1);

  Vector prev;  // previous angle's eigenvector warm-starts the next solve
  Vector u1(n), u2(n), u3(n), u4(n);
  for (int k = 0; k <= n_angles; ++k) {
    const double theta = k * std::numbers::pi / n_angles;
    const double c = std::cos(theta), s = std::sin(theta);

    // real symmetric embedding of the Hermitian part of e^{-i theta} P
    LinOp emb{static_cast<std::size_t>(2 * n), static_cast<std::size_t>(2 * n),
              [&](std::span<const double> v, std::span<double> w) {
                auto x = v.subspan(0, n), y = v.subspan(n, n);
                for (int i = 0; i < n; ++i) {
                  u1[i] = dot(Hr.row(i), x);
                  u2[i] = dot(Sk.row(i), y);
                  u3[i] = dot(Hr.row(i), y);
                  u4[i] = dot(Sk.row(i), x);
                }
                for (int i = 0; i < n; ++i) {
                  w[i] = c * u1[i] + s * u2[i];
                  w[n + i] = c * u3[i] - s * u4[i];
                }
              }};
    LanczosOptions opts;
    opts.max_iter = std::min(2 * n, 400);
    opts.tol = 1e-8;
    opts.want_vectors = true;
    opts.max_only = true;
    Vector warm;  // owns the warm start; opts.start is only a view of it
    if (!prev.empty()) {
      // A converged eigenvector can span an invariant subspace exactly
      // (zero skew part once cos(theta) changes sign), and the Krylov
      // space then breaks down on the wrong extreme. A tiny deterministic
      // blend keeps the warm start generic.
      warm = prev;
      const Vector jitter = random_initial_guess(warm.size(), 0xf0b0 + static_cast<std::uint64_t>(k));
      for (std::size_t i = 0; i < warm.size(); ++i) warm[i] += 1e-6 * jitter[i];
      opts.start = warm;
    }
    const LanczosResult lr = lanczos_extremes(emb, opts);
    if (!lr.converged)
      throw LanczosError("fov_boundary: eigensolve stalled at angle index " + std::to_string(k),
                         lr.lambda_min, lr.lambda_max);
    rep.support[k] = lr.lambda_max;
    prev = lr.vec_max;

    auto x = std::span<const double>(prev).subspan(0, n);
    auto y = std::span<const double>(prev).subspan(n, n);
    double re = 0.0, im = 0.0;
    for (int i = 0; i < n; ++i) {
      re += x[i] * dot(Hr.row(i), x) + y[i] * dot(Hr.row(i), y);
      im += x[i] * dot(Sk.row(i), y);
    }
    upper[k] = {re, 2.0 * im};
  }

  rep.boundary = upper;
  for (int k = n_angles - 1; k >= 1; --k)
    rep.boundary.push_back({upper[k][0], -upper[k][1]});
  return rep;
}

void write_fov_csv(const FovReport& report, std::ostream& out) {
  out << "theta,re,im\n" << std::setprecision(17);
  // boundary index k sits at angle k*pi/n_angles all the way around
  for (std::size_t k = 0; k < report.boundary.size(); ++k)
    out << k * std::numbers::pi / report.n_angles << "," << report.boundary[k][0] << ","
        << report.boundary[k][1] << "\n";
}

void write_spectrum_csv(std::span<const SpectrumReport> reports, std::ostream& out) {
  out << "delta,pu,lambda_min,lambda_max\n" << std::setprecision(17);
  for (const auto& r : reports)
    out << r.delta_over_h << "h," << r.pu << "," << r.lambda_min << "," << r.lambda_max << "\n";
}

}  // namespace soras
