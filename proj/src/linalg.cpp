#include "soraslab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace soras {

// ---- vector kernels -----------------------------------------------------

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double nrm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scal(double alpha, std::span<double> x) {
  for (double& v : x) v *= alpha;
}

// ---- CsrMatrix ----------------------------------------------------------

double CsrMatrix::at(int i, int j) const {
  for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
    if (col_indices[k] == j) return values[k];
  return 0.0;
}

void CsrMatrix::validate() const {
  if (static_cast<int>(row_offsets.size()) != nrows + 1)
    throw std::runtime_error("csr: row_offsets size");
  if (row_offsets.front() != 0 || row_offsets.back() != nnz())
    throw std::runtime_error("csr: row_offsets endpoints");
  for (int i = 0; i < nrows; ++i) {
    if (row_offsets[i] > row_offsets[i + 1]) throw std::runtime_error("csr: offsets decrease");
    for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
      if (col_indices[k] < 0 || col_indices[k] >= ncols) throw std::runtime_error("csr: column out of range");
      if (k > row_offsets[i] && col_indices[k] <= col_indices[k - 1])
        throw std::runtime_error("csr: columns not strictly increasing");
    }
  }
}

void CooBuilder::add(int i, int j, double v) {
  if (i < 0 || i >= nrows_ || j < 0 || j >= ncols_)
    throw std::out_of_range("CooBuilder::add: index out of range");
  is_.push_back(i);
  js_.push_back(j);
  vs_.push_back(v);
}

CsrMatrix CooBuilder::compress() const {
  const std::size_t nt = is_.size();
  // counting sort by row keeps insertion order within a row
  std::vector<int> row_count(nrows_ + 1, 0);
  for (std::size_t t = 0; t < nt; ++t) row_count[is_[t] + 1]++;
  std::vector<int> row_start(nrows_ + 1, 0);
  for (int i = 0; i < nrows_; ++i) row_start[i + 1] = row_start[i] + row_count[i + 1];
  std::vector<int> pos(row_start.begin(), row_start.end() - 1);
  std::vector<int> order(nt);
  for (std::size_t t = 0; t < nt; ++t) order[pos[is_[t]]++] = static_cast<int>(t);

  CsrMatrix A;
  A.nrows = nrows_;
  A.ncols = ncols_;
  A.row_offsets.assign(nrows_ + 1, 0);
  A.col_indices.reserve(nt);
  A.values.reserve(nt);
  std::vector<int> idx;
  for (int i = 0; i < nrows_; ++i) {
    idx.assign(order.begin() + row_start[i], order.begin() + row_start[i + 1]);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return js_[a] < js_[b]; });
    int last_col = -1;
    for (int t : idx) {
      if (js_[t] == last_col) {
        A.values.back() += vs_[t];
      } else {
        last_col = js_[t];
        A.col_indices.push_back(last_col);
        A.values.push_back(vs_[t]);
      }
    }
    A.row_offsets[i + 1] = static_cast<int>(A.col_indices.size());
  }
  return A;
}

Vector spmv(const CsrMatrix& A, std::span<const double> x) {
  Vector y(A.nrows, 0.0);
  spmv(A, x, y);
  return y;
}

void spmv(const CsrMatrix& A, std::span<const double> x, std::span<double> y) {
  if (static_cast<int>(x.size()) != A.ncols || static_cast<int>(y.size()) != A.nrows)
    throw std::invalid_argument("spmv: dimension mismatch");
  for (int i = 0; i < A.nrows; ++i) {
    double s = 0.0;
    for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k)
      s += A.values[k] * x[A.col_indices[k]];
    y[i] = s;
  }
}

CsrMatrix csr_identity(int n) {
  CsrMatrix A;
  A.nrows = A.ncols = n;
  A.row_offsets.resize(n + 1);
  A.col_indices.resize(n);
  A.values.assign(n, 1.0);
  for (int i = 0; i <= n; ++i) A.row_offsets[i] = i;
  std::iota(A.col_indices.begin(), A.col_indices.end(), 0);
  return A;
}

CsrMatrix csr_transpose(const CsrMatrix& A) {
  CooBuilder b(A.ncols, A.nrows);
  for (int i = 0; i < A.nrows; ++i)
    for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k)
      b.add(A.col_indices[k], i, A.values[k]);
  return b.compress();
}

// ---- DenseMatrix --------------------------------------------------------

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix I(n, n);
  for (int i = 0; i < n; ++i) I.at(i, i) = 1.0;
  return I;
}

DenseMatrix DenseMatrix::from_csr(const CsrMatrix& A) {
  DenseMatrix D(A.nrows, A.ncols);
  for (int i = 0; i < A.nrows; ++i)
    for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k)
      D.at(i, A.col_indices[k]) = A.values[k];
  return D;
}

Vector matvec(const DenseMatrix& A, std::span<const double> x) {
  if (static_cast<int>(x.size()) != A.ncols) throw std::invalid_argument("matvec: dimension mismatch");
  Vector y(A.nrows, 0.0);
  for (int i = 0; i < A.nrows; ++i) y[i] = dot(A.row(i), x);
  return y;
}

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B) {
  if (A.ncols != B.nrows) throw std::invalid_argument("matmul: dimension mismatch");
  DenseMatrix C(A.nrows, B.ncols);
  for (int i = 0; i < A.nrows; ++i) {
    double* ci = C.a.data() + static_cast<std::size_t>(i) * C.ncols;
    for (int k = 0; k < A.ncols; ++k) {
      const double aik = A.at(i, k);
      if (aik == 0.0) continue;
      const double* bk = B.a.data() + static_cast<std::size_t>(k) * B.ncols;
      for (int j = 0; j < B.ncols; ++j) ci[j] += aik * bk[j];
    }
  }
  return C;
}

DenseMatrix transpose(const DenseMatrix& A) {
  DenseMatrix T(A.ncols, A.nrows);
  for (int i = 0; i < A.nrows; ++i)
    for (int j = 0; j < A.ncols; ++j) T.at(j, i) = A.at(i, j);
  return T;
}

double max_abs_diff(const DenseMatrix& A, const DenseMatrix& B) {
  if (A.nrows != B.nrows || A.ncols != B.ncols)
    throw std::invalid_argument("max_abs_diff: dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < A.a.size(); ++i) m = std::max(m, std::abs(A.a[i] - B.a[i]));
  return m;
}

// ---- SparseLu -----------------------------------------------------------

SparseLu::SparseLu(const CsrMatrix& A) {
  if (A.nrows != A.ncols) throw std::invalid_argument("SparseLu: matrix not square");
  n_ = A.nrows;
  if (n_ == 0) throw std::invalid_argument("SparseLu: empty matrix");

  double amax = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      const int j = A.col_indices[k];
      kl_ = std::max(kl_, i - j);
      ku_ = std::max(ku_, j - i);
      amax = std::max(amax, std::abs(A.values[k]));
    }
  }
  if (amax == 0.0) throw std::runtime_error("SparseLu: zero matrix");
  const double pivot_tol = 1e-14 * amax;

  ldab_ = 2 * kl_ + ku_ + 1;
  ab_.assign(static_cast<std::size_t>(ldab_) * n_, 0.0);
  piv_.resize(n_);
  for (int i = 0; i < n_; ++i)
    for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k)
      band(i, A.col_indices[k]) = A.values[k];

  // banded Gaussian elimination with row partial pivoting
  const int kv = kl_ + ku_;  // widest column reach after pivoting
  for (int j = 0; j < n_; ++j) {
    const int ilast = std::min(n_ - 1, j + kl_);
    int p = j;
    double pmax = std::abs(band(j, j));
    for (int i = j + 1; i <= ilast; ++i) {
      const double v = std::abs(band(i, j));
      if (v > pmax) {
        pmax = v;
        p = i;
      }
    }
    if (pmax <= pivot_tol)
      throw std::runtime_error("SparseLu: singular matrix (zero pivot at column " + std::to_string(j) + ")");
    piv_[j] = p;
    const int klast = std::min(n_ - 1, j + kv);
    if (p != j)
      for (int k = j; k <= klast; ++k) std::swap(band(p, k), band(j, k));
    const double djj = band(j, j);
    for (int i = j + 1; i <= ilast; ++i) {
      const double lij = band(i, j) / djj;
      band(i, j) = lij;
      if (lij != 0.0)
        for (int k = j + 1; k <= klast; ++k) band(i, k) -= lij * band(j, k);
    }
  }
}

Vector SparseLu::solve(std::span<const double> b) const {
  Vector x(n_);
  solve(b, x);
  return x;
}

void SparseLu::solve(std::span<const double> b, std::span<double> x) const {
  if (static_cast<int>(b.size()) != n_ || static_cast<int>(x.size()) != n_)
    throw std::invalid_argument("SparseLu::solve: dimension mismatch");
  std::copy(b.begin(), b.end(), x.begin());
  const int kv = kl_ + ku_;
  for (int j = 0; j < n_; ++j) {
    if (piv_[j] != j) std::swap(x[piv_[j]], x[j]);
    const double xj = x[j];
    if (xj == 0.0) continue;
    const int ilast = std::min(n_ - 1, j + kl_);
    for (int i = j + 1; i <= ilast; ++i) x[i] -= band(i, j) * xj;
  }
  for (int j = n_ - 1; j >= 0; --j) {
    double s = x[j];
    const int klast = std::min(n_ - 1, j + kv);
    for (int k = j + 1; k <= klast; ++k) s -= band(j, k) * x[k];
    x[j] = s / band(j, j);
  }
}

// ---- operator helpers ---------------------------------------------------

LinOp make_op(const CsrMatrix& A) {
  LinOp op;
  op.rows = A.nrows;
  op.cols = A.ncols;
  op.apply = [&A](std::span<const double> x, std::span<double> y) { spmv(A, x, y); };
  return op;
}

LinOp make_identity_op(std::size_t n) {
  LinOp op;
  op.rows = op.cols = n;
  op.apply = [](std::span<const double> x, std::span<double> y) {
    std::copy(x.begin(), x.end(), y.begin());
  };
  return op;
}

// ---- Matrix Market ------------------------------------------------------

void write_matrix_market(const CsrMatrix& A, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.nrows << ' ' << A.ncols << ' ' << A.nnz() << '\n';
  out.precision(17);
  for (int i = 0; i < A.nrows; ++i)
    for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k)
      out << i + 1 << ' ' << A.col_indices[k] + 1 << ' ' << A.values[k] << '\n';
}

void write_matrix_market(const CsrMatrix& A, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  write_matrix_market(A, f);
}

CsrMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw std::runtime_error("matrix market: missing banner");
  if (line.find("coordinate") == std::string::npos || line.find("real") == std::string::npos ||
      line.find("general") == std::string::npos)
    throw std::runtime_error("matrix market: only coordinate real general supported");
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '%') break;
  int m = 0, n = 0, nnz = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> m >> n >> nnz)) throw std::runtime_error("matrix market: bad size line");
  }
  CooBuilder b(m, n);
  for (int t = 0; t < nnz; ++t) {
    int i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v)) throw std::runtime_error("matrix market: truncated entries");
    b.add(i - 1, j - 1, v);
  }
  return b.compress();
}

CsrMatrix read_matrix_market_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return read_matrix_market(f);
}

}  // namespace soras
