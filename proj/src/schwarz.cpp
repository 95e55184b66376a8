#include "soraslab/schwarz.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "soraslab/parallel.hpp"

namespace soras {

SorasPreconditioner::SorasPreconditioner(const std::vector<Subdomain>& subdomains,
                                         const PartitionOfUnity& pu,
                                         const std::vector<CsrMatrix>& local_matrices,
                                         SchwarzVariant variant)
    : variant_(variant) {
  if (subdomains.empty()) throw std::invalid_argument("preconditioner: no subdomains");
  if (pu.d.size() != subdomains.size() || local_matrices.size() != subdomains.size())
    throw std::invalid_argument("preconditioner: inconsistent subdomain counts");

  for (std::size_t j = 0; j < subdomains.size(); ++j) {
    const Subdomain& s = subdomains[j];
    if (static_cast<int>(pu.d[j].size()) != s.n() || local_matrices[j].nrows != s.n())
      throw std::invalid_argument("preconditioner: dimension mismatch in subdomain " +
                                  std::to_string(j));
    for (int id : s.nodes) n_ = std::max(n_, static_cast<std::size_t>(id) + 1);
  }
  locals_.reserve(subdomains.size());
  for (std::size_t j = 0; j < subdomains.size(); ++j) {
    try {
      locals_.push_back({subdomains[j].nodes, pu.d[j], SparseLu(local_matrices[j])});
    } catch (const std::exception& e) {
      throw std::runtime_error("preconditioner: factorization failed for subdomain " +
                               std::to_string(j) + ": " + e.what());
    }
  }
}

void SorasPreconditioner::apply(std::span<const double> v, std::span<double> out) const {
  if (v.size() != n_ || out.size() != n_)
    throw std::invalid_argument("preconditioner apply: dimension mismatch");

  // local solves may run concurrently; the reduction below stays ordered
  std::vector<Vector> z(locals_.size());
  parallel_for(locals_.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const Local& loc = locals_[j];
      const std::size_t nj = loc.map.size();
      Vector r(nj);
      for (std::size_t i = 0; i < nj; ++i) r[i] = v[loc.map[i]];
      if (variant_ == SchwarzVariant::SORAS)
        for (std::size_t i = 0; i < nj; ++i) r[i] *= loc.d[i];
      z[j] = loc.lu.solve(r);
      for (std::size_t i = 0; i < nj; ++i) z[j][i] *= loc.d[i];
    }
  });

  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < locals_.size(); ++j) {
    const Local& loc = locals_[j];
    for (std::size_t i = 0; i < loc.map.size(); ++i) out[loc.map[i]] += z[j][i];
  }
}

Vector SorasPreconditioner::apply(std::span<const double> v) const {
  Vector out(n_);
  apply(v, out);
  return out;
}

LinOp SorasPreconditioner::op() const {
  return {n_, n_, [this](std::span<const double> x, std::span<double> y) { apply(x, y); }};
}

SorasPreconditioner build_preconditioner(const std::vector<Subdomain>& subdomains,
                                         const PartitionOfUnity& pu,
                                         const std::vector<CsrMatrix>& local_matrices,
                                         SchwarzVariant variant) {
  return SorasPreconditioner(subdomains, pu, local_matrices, variant);
}

Vector apply_preconditioner(const SorasPreconditioner& P, std::span<const double> v) {
  return P.apply(v);
}

}  // namespace soras
