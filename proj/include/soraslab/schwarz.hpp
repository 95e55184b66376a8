#pragma once
#include <span>
#include <vector>

#include "soraslab/decomp.hpp"
#include "soraslab/linalg.hpp"

namespace soras {

enum class SchwarzVariant { SORAS, ORAS };

/// One-level Schwarz operator sum_j R_j^T D_j B_j^{-1} D_j R_j (SORAS);
/// the ORAS variant drops the rightmost D_j. Local factorizations are
/// immutable after construction; subdomain contributions are accumulated
/// in ascending j so repeated applies are bitwise identical.
class SorasPreconditioner {
 public:
  SorasPreconditioner(const std::vector<Subdomain>& subdomains, const PartitionOfUnity& pu,
                      const std::vector<CsrMatrix>& local_matrices, SchwarzVariant variant);

  void apply(std::span<const double> v, std::span<double> out) const;
  Vector apply(std::span<const double> v) const;
  LinOp op() const;

  std::size_t dim() const { return n_; }
  SchwarzVariant variant() const { return variant_; }
  int subdomain_count() const { return static_cast<int>(locals_.size()); }

 private:
  struct Local {
    std::vector<int> map;  // global indices of the subdomain's nodes
    Vector d;
    SparseLu lu;
  };
  std::vector<Local> locals_;
  std::size_t n_ = 0;
  SchwarzVariant variant_ = SchwarzVariant::SORAS;
};

SorasPreconditioner build_preconditioner(const std::vector<Subdomain>& subdomains,
                                         const PartitionOfUnity& pu,
                                         const std::vector<CsrMatrix>& local_matrices,
                                         SchwarzVariant variant);

Vector apply_preconditioner(const SorasPreconditioner& P, std::span<const double> v);

}  // namespace soras
