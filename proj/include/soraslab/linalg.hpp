#pragma once
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace soras {

using Vector = std::vector<double>;

// ---- small vector kernels ----------------------------------------------

double dot(std::span<const double> x, std::span<const double> y);
double nrm2(std::span<const double> x);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scal(double alpha, std::span<double> x);

// ---- sparse matrix ------------------------------------------------------

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row.
struct CsrMatrix {
  int nrows = 0;
  int ncols = 0;
  std::vector<int> row_offsets;  // size nrows+1
  std::vector<int> col_indices;
  std::vector<double> values;

  int nnz() const { return static_cast<int>(col_indices.size()); }
  // Value at (i, j), zero if not stored.
  double at(int i, int j) const;
  void validate() const;  // throws on malformed structure
};

/// Triplet accumulator. Duplicate (i, j) entries are summed in insertion
/// order when compressed, so assembly is deterministic for a fixed
/// element order.
class CooBuilder {
 public:
  CooBuilder(int nrows, int ncols) : nrows_(nrows), ncols_(ncols) {}
  void add(int i, int j, double v);
  CsrMatrix compress() const;
  int nrows() const { return nrows_; }
  int ncols() const { return ncols_; }

 private:
  int nrows_, ncols_;
  std::vector<int> is_, js_;
  std::vector<double> vs_;
};

Vector spmv(const CsrMatrix& A, std::span<const double> x);
void spmv(const CsrMatrix& A, std::span<const double> x, std::span<double> y);

CsrMatrix csr_identity(int n);
CsrMatrix csr_transpose(const CsrMatrix& A);

// ---- dense matrix -------------------------------------------------------

/// Row-major dense matrix.
struct DenseMatrix {
  int nrows = 0;
  int ncols = 0;
  std::vector<double> a;

  DenseMatrix() = default;
  DenseMatrix(int m, int n) : nrows(m), ncols(n), a(static_cast<std::size_t>(m) * n, 0.0) {}

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * ncols + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * ncols + j]; }
  std::span<double> row(int i) { return {a.data() + static_cast<std::size_t>(i) * ncols, static_cast<std::size_t>(ncols)}; }
  std::span<const double> row(int i) const { return {a.data() + static_cast<std::size_t>(i) * ncols, static_cast<std::size_t>(ncols)}; }

  static DenseMatrix identity(int n);
  static DenseMatrix from_csr(const CsrMatrix& A);
};

Vector matvec(const DenseMatrix& A, std::span<const double> x);
DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B);
DenseMatrix transpose(const DenseMatrix& A);
double max_abs_diff(const DenseMatrix& A, const DenseMatrix& B);

// ---- sparse LU ----------------------------------------------------------

/// LU factorization with row partial pivoting. The fill-in structure is
/// the band hull of the input pattern: column elimination runs in natural
/// order and fill stays within lower bandwidth kl and upper bandwidth
/// ku + kl, which is exact for the banded matrices produced by the strip
/// meshes and degrades to dense cost only for unstructured patterns.
class SparseLu {
 public:
  explicit SparseLu(const CsrMatrix& A);

  Vector solve(std::span<const double> b) const;
  void solve(std::span<const double> b, std::span<double> x) const;
  int dim() const { return n_; }

 private:
  int n_ = 0;
  int kl_ = 0, ku_ = 0;  // bandwidths of the input pattern
  int ldab_ = 0;         // 2*kl+ku+1 storage rows
  std::vector<double> ab_;
  std::vector<int> piv_;

  double& band(int i, int j) { return ab_[static_cast<std::size_t>(kl_ + ku_ + i - j) + static_cast<std::size_t>(j) * ldab_]; }
  double band(int i, int j) const { return ab_[static_cast<std::size_t>(kl_ + ku_ + i - j) + static_cast<std::size_t>(j) * ldab_]; }
};

// ---- operator callback --------------------------------------------------

/// Matrix-free linear operator, the shape GMRES and the spectral
/// diagnostics consume.
struct LinOp {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::function<void(std::span<const double>, std::span<double>)> apply;

  Vector operator()(std::span<const double> x) const {
    Vector y(rows, 0.0);
    apply(x, y);
    return y;
  }
};

LinOp make_op(const CsrMatrix& A);
LinOp make_identity_op(std::size_t n);

// ---- Matrix Market coordinate format ------------------------------------

void write_matrix_market(const CsrMatrix& A, std::ostream& out);
void write_matrix_market(const CsrMatrix& A, const std::string& path);
CsrMatrix read_matrix_market(std::istream& in);
CsrMatrix read_matrix_market_file(const std::string& path);

}  // namespace soras
