#pragma once
// Small self-contained reference implementations used only by the tests.
// They deliberately share no code with the library: plain Gaussian
// elimination, a degree-5 triangle quadrature, and a Hessenberg-QR
// eigenvalue iteration, each written directly from the textbook formulas.
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

// Row-major dense n x n solve by Gaussian elimination with partial
// pivoting; overwrites nothing.
inline std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  if (a.size() != n * n) throw std::invalid_argument("dense_solve: shape mismatch");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(a[i * n + k]) > std::fabs(a[piv * n + k])) piv = i;
    if (a[piv * n + k] == 0.0) throw std::runtime_error("dense_solve: singular matrix");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = a[i * n + k] / a[k * n + k];
      if (m == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a[i * n + j] -= m * a[k * n + j];
      b[i] -= m * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * x[j];
    x[i] = s / a[i * n + i];
  }
  return x;
}

inline std::vector<double> dense_inverse(const std::vector<double>& a, std::size_t n) {
  std::vector<double> inv(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    const std::vector<double> col = dense_solve(a, e);
    for (std::size_t i = 0; i < n; ++i) inv[i * n + j] = col[i];
  }
  return inv;
}

// 7-point degree-5 rule on an arbitrary triangle, in barycentric form.
inline double triangle_integrate(const std::array<double, 2>& p0, const std::array<double, 2>& p1,
                                 const std::array<double, 2>& p2,
                                 const std::function<double(double, double)>& f) {
  const double s15 = std::sqrt(15.0);
  const double a1 = (6.0 - s15) / 21.0, w1 = (155.0 - s15) / 1200.0;
  const double a2 = (6.0 + s15) / 21.0, w2 = (155.0 + s15) / 1200.0;
  const double bary[7][4] = {
      {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 9.0 / 40.0},
      {a1, a1, 1.0 - 2.0 * a1, w1},
      {a1, 1.0 - 2.0 * a1, a1, w1},
      {1.0 - 2.0 * a1, a1, a1, w1},
      {a2, a2, 1.0 - 2.0 * a2, w2},
      {a2, 1.0 - 2.0 * a2, a2, w2},
      {1.0 - 2.0 * a2, a2, a2, w2},
  };
  const double area = 0.5 * std::fabs((p1[0] - p0[0]) * (p2[1] - p0[1]) -
                                      (p2[0] - p0[0]) * (p1[1] - p0[1]));
  double sum = 0.0;
  for (const auto& q : bary) {
    const double x = q[0] * p0[0] + q[1] * p1[0] + q[2] * p2[0];
    const double y = q[0] * p0[1] + q[1] * p1[1] + q[2] * p2[1];
    sum += q[3] * f(x, y);
  }
  return area * sum;
}

// Eigenvalues of a real dense matrix: Householder reduction to Hessenberg
// form followed by the shifted QR iteration with 2x2 deflation.
inline std::vector<std::complex<double>> dense_eigenvalues(std::vector<double> a, int n) {
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };

  // Householder similarity transforms, column by column
  for (int k = 0; k < n - 2; ++k) {
    double scale = 0.0;
    for (int i = k + 1; i < n; ++i) scale += std::fabs(at(i, k));
    if (scale == 0.0) continue;
    double h = 0.0;
    std::vector<double> v(n, 0.0);
    for (int i = k + 1; i < n; ++i) {
      v[i] = at(i, k) / scale;
      h += v[i] * v[i];
    }
    double g = std::sqrt(h);
    if (v[k + 1] > 0.0) g = -g;
    h -= v[k + 1] * g;
    v[k + 1] -= g;
    if (h == 0.0) continue;
    // A <- (I - vv^T/h) A (I - vv^T/h)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = k + 1; i < n; ++i) s += v[i] * at(i, j);
      s /= h;
      for (int i = k + 1; i < n; ++i) at(i, j) -= s * v[i];
    }
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = k + 1; j < n; ++j) s += at(i, j) * v[j];
      s /= h;
      for (int j = k + 1; j < n; ++j) at(i, j) -= s * v[j];
    }
    at(k + 1, k) = scale * g;
    for (int i = k + 2; i < n; ++i) at(i, k) = 0.0;
  }

  // shifted QR on the Hessenberg matrix (classic hqr)
  std::vector<std::complex<double>> eig;
  eig.reserve(n);
  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::fabs(at(i, j));
  int nn = n - 1;
  double t = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l;
    do {
      for (l = nn; l >= 1; --l) {
        const double s = std::fabs(at(l - 1, l - 1)) + std::fabs(at(l, l));
        const double cmp = s == 0.0 ? anorm : s;
        if (std::fabs(at(l, l - 1)) + cmp == cmp) {
          at(l, l - 1) = 0.0;
          break;
        }
      }
      double x = at(nn, nn);
      if (l == nn) {
        eig.emplace_back(x + t, 0.0);
        --nn;
      } else {
        double y = at(nn - 1, nn - 1);
        double w = at(nn, nn - 1) * at(nn - 1, nn);
        if (l == nn - 1) {
          const double p = 0.5 * (y - x);
          const double q = p * p + w;
          const double z = std::sqrt(std::fabs(q));
          const double xt = x + t;
          if (q >= 0.0) {
            const double zz = p + (p >= 0.0 ? z : -z);
            eig.emplace_back(xt + zz, 0.0);
            eig.emplace_back(zz != 0.0 ? xt - w / zz : xt + zz, 0.0);
          } else {
            eig.emplace_back(xt + p, z);
            eig.emplace_back(xt + p, -z);
          }
          nn -= 2;
        } else {
          if (its == 60) throw std::runtime_error("dense_eigenvalues: no convergence");
          double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
          if (its == 10 || its == 20) {  // exceptional shift
            t += x;
            for (int i = 0; i <= nn; ++i) at(i, i) -= x;
            const double s = std::fabs(at(nn, nn - 1)) + std::fabs(at(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m;
          for (m = nn - 2; m >= l; --m) {
            z = at(m, m);
            const double rr = x - z;
            const double ss = y - z;
            p = (rr * ss - w) / at(m + 1, m) + at(m, m + 1);
            q = at(m + 1, m + 1) - z - rr - ss;
            r = at(m + 2, m + 1);
            const double s = std::fabs(p) + std::fabs(q) + std::fabs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::fabs(at(m, m - 1)) * (std::fabs(q) + std::fabs(r));
            const double v = std::fabs(p) * (std::fabs(at(m - 1, m - 1)) + std::fabs(z) +
                                             std::fabs(at(m + 1, m + 1)));
            if (u + v == v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            at(i, i - 2) = 0.0;
            if (i != m + 2) at(i, i - 3) = 0.0;
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = at(k, k - 1);
              q = at(k + 1, k - 1);
              r = k != nn - 1 ? at(k + 2, k - 1) : 0.0;
              x = std::fabs(p) + std::fabs(q) + std::fabs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            double s = std::sqrt(p * p + q * q + r * r);
            if (p < 0.0) s = -s;
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) at(k, k - 1) = -at(k, k - 1);
            } else {
              at(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            z = r / s;
            q /= p;
            r /= p;
            for (int j = k; j <= nn; ++j) {
              p = at(k, j) + q * at(k + 1, j);
              if (k != nn - 1) {
                p += r * at(k + 2, j);
                at(k + 2, j) -= p * z;
              }
              at(k + 1, j) -= p * y;
              at(k, j) -= p * x;
            }
            const int mmin = nn < k + 3 ? nn : k + 3;
            for (int i = l; i <= mmin; ++i) {
              p = x * at(i, k) + y * at(i, k + 1);
              if (k != nn - 1) {
                p += z * at(i, k + 2);
                at(i, k + 2) -= p * r;
              }
              at(i, k + 1) -= p * q;
              at(i, k) -= p;
            }
          }
        }
      }
    } while (nn >= 0 && l < nn);  // note: l compared against the shrunk nn
  }
  return eig;
}

}  // namespace oracle
