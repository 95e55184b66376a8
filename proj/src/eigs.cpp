#include "soraslab/eigs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace soras {

namespace {

// splitmix64; used for reproducible start vectors
std::uint64_t mix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// eigenvalue count of the symmetric tridiagonal (alpha, beta) below x
int sturm_count(std::span<const double> alpha, std::span<const double> beta, double x) {
  const int m = static_cast<int>(alpha.size());
  int count = 0;
  double d = 1.0;
  for (int i = 0; i < m; ++i) {
    const double b2 = i > 0 ? beta[i - 1] * beta[i - 1] : 0.0;
    d = alpha[i] - x - (i > 0 ? b2 / d : 0.0);
    if (d == 0.0) d = -1e-300;
    if (d < 0.0) ++count;
  }
  return count;
}

// k-th smallest eigenvalue (0-based) by bisection
double tridiag_eig_k(std::span<const double> alpha, std::span<const double> beta, int k) {
  const int m = static_cast<int>(alpha.size());
  double lo = alpha[0], hi = alpha[0];
  for (int i = 0; i < m; ++i) {
    const double r = (i > 0 ? std::abs(beta[i - 1]) : 0.0) + (i + 1 < m ? std::abs(beta[i]) : 0.0);
    lo = std::min(lo, alpha[i] - r);
    hi = std::max(hi, alpha[i] + r);
  }
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  for (int it = 0; it < 120 && hi - lo > 1e-15 * scale; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(alpha, beta, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// eigenvector of the tridiagonal at a converged eigenvalue, by inverse
// iteration with a partially pivoted Thomas solve
Vector tridiag_eigvec(std::span<const double> alpha, std::span<const double> beta, double lambda) {
  const int m = static_cast<int>(alpha.size());
  Vector s(m);
  std::uint64_t st = 0x7157u;
  for (int i = 0; i < m; ++i) s[i] = (mix64(st) >> 11) * 0x1.0p-53 - 0.5;
  double norm = nrm2(s);
  for (double& v : s) v /= norm;

  const double shift = lambda + 1e-12 * std::max(1.0, std::abs(lambda));
  for (int pass = 0; pass < 3; ++pass) {
    // solve (T - shift I) y = s with row pivoting
    Vector d(m), e(m, 0.0), f(m, 0.0), y = s;
    for (int i = 0; i < m; ++i) d[i] = alpha[i] - shift;
    for (int i = 0; i + 1 < m; ++i) e[i] = beta[i];
    std::vector<double> sub(m, 0.0);
    for (int i = 0; i + 1 < m; ++i) sub[i + 1] = beta[i];
    for (int i = 0; i + 1 < m; ++i) {
      if (std::abs(sub[i + 1]) > std::abs(d[i])) {
        std::swap(d[i], sub[i + 1]);
        std::swap(e[i], d[i + 1]);
        std::swap(f[i], e[i + 1]);
        std::swap(y[i], y[i + 1]);
      }
      if (d[i] == 0.0) d[i] = 1e-300;
      const double l = sub[i + 1] / d[i];
      d[i + 1] -= l * e[i];
      e[i + 1] -= l * f[i];
      y[i + 1] -= l * y[i];
    }
    if (d[m - 1] == 0.0) d[m - 1] = 1e-300;
    for (int i = m - 1; i >= 0; --i) {
      double v = y[i];
      if (i + 1 < m) v -= e[i] * y[i + 1];
      if (i + 2 < m) v -= f[i] * y[i + 2];
      y[i] = v / d[i];
    }
    norm = nrm2(y);
    if (norm == 0.0) break;
    for (int i = 0; i < m; ++i) s[i] = y[i] / norm;
  }
  return s;
}

}  // namespace

// ---- Jacobi -------------------------------------------------------------

JacobiResult jacobi_eig_sym(const DenseMatrix& A_in) {
  if (A_in.nrows != A_in.ncols) throw std::invalid_argument("jacobi_eig_sym: matrix not square");
  const int n = A_in.nrows;
  double amax = 0.0, asym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      amax = std::max(amax, std::abs(A_in.at(i, j)));
      asym = std::max(asym, std::abs(A_in.at(i, j) - A_in.at(j, i)));
    }
  if (asym > 1e-8 * (1.0 + amax))
    throw std::invalid_argument("jacobi_eig_sym: matrix not symmetric");

  DenseMatrix A = A_in;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (A.at(i, j) + A.at(j, i));
      A.at(i, j) = A.at(j, i) = v;
    }
  DenseMatrix V = DenseMatrix::identity(n);

  double fro = 0.0;
  for (double v : A.a) fro += v * v;
  fro = std::sqrt(fro);
  const double stop = 1e-15 * std::max(fro, 1e-300);

  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += 2.0 * A.at(i, j) * A.at(i, j);
    if (std::sqrt(off) <= stop) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = A.at(p, q);
        if (apq == 0.0) continue;
        const double app = A.at(p, p), aqq = A.at(q, q);
        const double theta = 0.5 * (aqq - app) / apq;
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = A.at(k, p), akq = A.at(k, q);
          A.at(k, p) = c * akp - s * akq;
          A.at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = A.at(p, k), aqk = A.at(q, k);
          A.at(p, k) = c * apk - s * aqk;
          A.at(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = V.at(k, p), vkq = V.at(k, q);
          V.at(k, p) = c * vkp - s * vkq;
          V.at(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return A.at(a, a) < A.at(b, b); });
  JacobiResult r;
  r.eigenvalues.resize(n);
  r.vectors = DenseMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    r.eigenvalues[k] = A.at(order[k], order[k]);
    for (int i = 0; i < n; ++i) r.vectors.at(i, k) = V.at(i, order[k]);
  }
  return r;
}

// ---- Cholesky -----------------------------------------------------------

DenseMatrix cholesky(const DenseMatrix& A) {
  if (A.nrows != A.ncols) throw std::invalid_argument("cholesky: matrix not square");
  const int n = A.nrows;
  DenseMatrix L(n, n);
  for (int i = 0; i < n; ++i) {
    const double* li = L.a.data() + static_cast<std::size_t>(i) * n;
    for (int j = 0; j <= i; ++j) {
      const double* lj = L.a.data() + static_cast<std::size_t>(j) * n;
      double s = A.at(i, j);
      for (int k = 0; k < j; ++k) s -= li[k] * lj[k];
      if (i == j) {
        if (s <= 0.0) throw std::runtime_error("cholesky: matrix not positive definite");
        L.at(i, i) = std::sqrt(s);
      } else {
        L.at(i, j) = s / L.at(j, j);
      }
    }
  }
  return L;
}

// ---- Lanczos ------------------------------------------------------------

LanczosResult lanczos_extremes(const LinOp& op, const LanczosOptions& opts) {
  const int n = static_cast<int>(op.rows);
  const int kmax = std::min(opts.max_iter, n);
  LanczosResult res;

  Vector v(n);
  if (!opts.start.empty()) {
    if (static_cast<int>(opts.start.size()) != n)
      throw std::invalid_argument("lanczos_extremes: start vector dimension mismatch");
    std::copy(opts.start.begin(), opts.start.end(), v.begin());
  } else {
    std::uint64_t st = opts.seed;
    for (int i = 0; i < n; ++i) v[i] = (mix64(st) >> 11) * 0x1.0p-53 - 0.5;
  }
  double nv = nrm2(v);
  if (nv == 0.0) throw std::invalid_argument("lanczos_extremes: zero start vector");
  scal(1.0 / nv, v);

  std::vector<Vector> V;
  V.push_back(v);
  Vector alpha, beta;
  Vector w(n);

  double prev_min = 0.0, prev_max = 0.0;
  int stable = 0;
  bool exact_breakdown = false;

  for (int j = 0; j < kmax; ++j) {
    op.apply(V[j], w);
    if (j > 0) axpy(-beta[j - 1], V[j - 1], w);
    const double a = dot(w, V[j]);
    alpha.push_back(a);
    axpy(-a, V[j], w);
    for (int i = 0; i <= j; ++i) axpy(-dot(w, V[i]), V[i], w);

    const double b = nrm2(w);
    res.iterations = j + 1;

    const double lmin = tridiag_eig_k(alpha, beta, 0);
    const double lmax = tridiag_eig_k(alpha, beta, j);
    const double scale = std::max({1.0, std::abs(lmin), std::abs(lmax)});

    if (b <= 1e-14 * scale) {
      // invariant subspace: the Ritz extremes are exact for it
      res.lambda_min = lmin;
      res.lambda_max = lmax;
      res.converged = true;
      exact_breakdown = true;
      break;
    }

    if (j > 0) {
      const bool max_ok = std::abs(lmax - prev_max) <= opts.tol * scale;
      const bool min_ok = opts.max_only || std::abs(lmin - prev_min) <= opts.tol * scale;
      stable = (max_ok && min_ok) ? stable + 1 : 0;
    }
    prev_min = lmin;
    prev_max = lmax;
    res.lambda_min = lmin;
    res.lambda_max = lmax;
    if (stable >= 4) {
      res.converged = true;
      break;
    }

    if (j + 1 < kmax) {
      beta.push_back(b);
      Vector vn = w;
      scal(1.0 / b, vn);
      V.push_back(std::move(vn));
    }
  }
  if (res.iterations == kmax && static_cast<int>(alpha.size()) == n && !exact_breakdown)
    res.converged = true;  // full Krylov space, extremes exact

  if (opts.want_vectors) {
    const int m = static_cast<int>(alpha.size());
    auto assemble = [&](double lambda) {
      Vector s = tridiag_eigvec(alpha, beta, lambda);
      Vector z(n, 0.0);
      for (int i = 0; i < m && i < static_cast<int>(V.size()); ++i) axpy(s[i], V[i], z);
      const double zn = nrm2(z);
      if (zn > 0.0) scal(1.0 / zn, z);
      return z;
    };
    if (m == 1) {
      res.vec_min = res.vec_max = V[0];
    } else {
      if (!opts.max_only) res.vec_min = assemble(res.lambda_min);
      res.vec_max = assemble(res.lambda_max);
    }
  }
  return res;
}

std::pair<double, double> lanczos_extremes(const LinOp& op, int max_iter, double tol) {
  LanczosOptions opts;
  opts.max_iter = max_iter;
  opts.tol = tol;
  LanczosResult r = lanczos_extremes(op, opts);
  if (!r.converged)
    throw LanczosError("lanczos_extremes: no convergence in " + std::to_string(max_iter) +
                           " iterations (best estimates " + std::to_string(r.lambda_min) + ", " +
                           std::to_string(r.lambda_max) + ")",
                       r.lambda_min, r.lambda_max);
  return {r.lambda_min, r.lambda_max};
}

}  // namespace soras
