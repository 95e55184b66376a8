#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "soraslab/assembly.hpp"
#include "soraslab/decomp.hpp"
#include "soraslab/linalg.hpp"
#include "soraslab/mesh.hpp"
#include "soraslab/schwarz.hpp"

using namespace soras;

namespace {

struct Stack {
  Mesh mesh;
  std::vector<Subdomain> subs;
  PartitionOfUnity pu;
  std::vector<CsrMatrix> locals;
  CsrMatrix A;
};

Stack build_stack(int N, int ny, int layers, PuKind kind, const Coefficients& co) {
  Stack s;
  s.mesh = build_strip_mesh(N, ny);
  s.subs = add_overlap(s.mesh, partition_strips(s.mesh, N), layers);
  s.pu = build_pu(kind, s.mesh, s.subs, layers);
  for (const Subdomain& sub : s.subs) s.locals.push_back(assemble_local(s.mesh, sub, co));
  s.A = assemble_global(s.mesh, co, SourceTerm{}).A;
  return s;
}

Vector random_vector(std::size_t n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (double& x : v) x = u(gen);
  return v;
}

// dense sum over subdomains of R^T D B^{-1} (D) R
DenseMatrix dense_expansion(const Stack& s, SchwarzVariant variant) {
  const int n = s.mesh.node_count();
  DenseMatrix E(n, n);
  for (std::size_t j = 0; j < s.subs.size(); ++j) {
    const auto& nodes = s.subs[j].nodes;
    const int nj = static_cast<int>(nodes.size());
    const DenseMatrix B = DenseMatrix::from_csr(s.locals[j]);
    const auto Binv = oracle::dense_inverse(B.a, nj);
    for (int i = 0; i < nj; ++i)
      for (int k = 0; k < nj; ++k) {
        double v = s.pu.d[j][i] * Binv[static_cast<std::size_t>(i) * nj + k];
        if (variant == SchwarzVariant::SORAS) v *= s.pu.d[j][k];
        E.at(nodes[i], nodes[k]) += v;
      }
  }
  return E;
}

double symmetry_defect(const SorasPreconditioner& P, const Vector& u, const Vector& v) {
  const Vector Pu = P.apply(u);
  const Vector Pv = P.apply(v);
  return std::fabs(dot(Pu, v) - dot(u, Pv)) / (nrm2(Pu) * nrm2(v) + nrm2(u) * nrm2(Pv));
}

}  // namespace

TEST_CASE("single subdomain applies the exact inverse") {
  Coefficients co;
  co.c0 = 1.0;
  co.nu = 0.5;
  const Stack s = build_stack(1, 6, 1, PuKind::PU2, co);
  const SorasPreconditioner P(s.subs, s.pu, s.locals, SchwarzVariant::SORAS);
  const Vector b = random_vector(P.dim(), 11);
  const Vector x = P.apply(b);
  const Vector r = spmv(s.A, x);
  for (std::size_t i = 0; i < b.size(); ++i)
    CHECK(r[i] == doctest::Approx(b[i]).epsilon(1e-10));
}

TEST_CASE("application matches the dense expansion") {
  Coefficients co;
  co.c0 = 1.0;
  co.nu = 0.1;
  co.velocity = VelocityKind::Rotating;
  for (const SchwarzVariant variant : {SchwarzVariant::SORAS, SchwarzVariant::ORAS}) {
    const Stack s = build_stack(3, 6, 2, PuKind::PU2, co);
    const SorasPreconditioner P(s.subs, s.pu, s.locals, variant);
    const DenseMatrix E = dense_expansion(s, variant);
    for (unsigned trial = 0; trial < 20; ++trial) {
      const Vector v = random_vector(P.dim(), 100 + trial);
      const Vector got = P.apply(v);
      const Vector want = matvec(E, v);
      double diff = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < got.size(); ++i) {
        diff = std::max(diff, std::fabs(got[i] - want[i]));
        scale = std::max(scale, std::fabs(want[i]));
      }
      CHECK(diff <= 1e-10 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("the two variants differ away from the trivial decomposition") {
  Coefficients co;
  const Stack s = build_stack(2, 6, 2, PuKind::PU2, co);
  const SorasPreconditioner soras(s.subs, s.pu, s.locals, SchwarzVariant::SORAS);
  const SorasPreconditioner oras(s.subs, s.pu, s.locals, SchwarzVariant::ORAS);
  const Vector v = random_vector(soras.dim(), 7);
  const Vector a = soras.apply(v);
  const Vector b = oras.apply(v);
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::fabs(a[i] - b[i]));
  CHECK(diff > 1e-8);
}

TEST_CASE("weighted variant is symmetric for the symmetric problem") {
  Coefficients co;  // zero velocity: B_j = B_j^T
  co.c0 = 1.0;
  co.nu = 0.05;
  for (const PuKind kind : {PuKind::PU1, PuKind::PU2}) {
    const Stack s = build_stack(3, 6, 2, kind, co);
    const SorasPreconditioner soras(s.subs, s.pu, s.locals, SchwarzVariant::SORAS);
    const SorasPreconditioner oras(s.subs, s.pu, s.locals, SchwarzVariant::ORAS);
    const Vector u = random_vector(soras.dim(), 21);
    const Vector v = random_vector(soras.dim(), 22);
    CHECK(symmetry_defect(soras, u, v) <= 1e-11);
    // the one-sided weighting loses symmetry outright
    CHECK(symmetry_defect(oras, u, v) > 1e-6);
  }
}

TEST_CASE("contributions stay inside the owning subdomains") {
  Coefficients co;
  const Stack s = build_stack(3, 6, 1, PuKind::PU2, co);
  const SorasPreconditioner P(s.subs, s.pu, s.locals, SchwarzVariant::SORAS);
  // a node strictly inside the first strip, away from any overlap
  const int k = s.mesh.node_id(2, 3);
  std::vector<char> in_sub0(s.mesh.node_count(), 0);
  for (int id : s.subs[0].nodes) in_sub0[id] = 1;
  REQUIRE(in_sub0[k] == 1);
  Vector e(P.dim(), 0.0);
  e[k] = 1.0;
  const Vector out = P.apply(e);
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!in_sub0[i]) CHECK(out[i] == 0.0);
}

TEST_CASE("application is linear") {
  Coefficients co;
  co.velocity = VelocityKind::NegDiv;
  co.c0 = 2.5;  // keeps c~ positive
  const Stack s = build_stack(2, 6, 1, PuKind::PU1, co);
  const SorasPreconditioner P(s.subs, s.pu, s.locals, SchwarzVariant::SORAS);
  const Vector u = random_vector(P.dim(), 31);
  const Vector v = random_vector(P.dim(), 32);
  Vector w(P.dim());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 0.3 * u[i] - 1.7 * v[i];
  const Vector Pw = P.apply(w);
  const Vector Pu = P.apply(u);
  const Vector Pv = P.apply(v);
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < Pw.size(); ++i) {
    diff = std::max(diff, std::fabs(Pw[i] - (0.3 * Pu[i] - 1.7 * Pv[i])));
    scale = std::max(scale, std::fabs(Pw[i]));
  }
  CHECK(diff <= 1e-10 * std::max(1.0, scale));
}

TEST_CASE("repeated applications are bitwise identical") {
  Coefficients co;
  co.velocity = VelocityKind::Rotating;
  const Stack s = build_stack(3, 6, 2, PuKind::PU2, co);
  const SorasPreconditioner P(s.subs, s.pu, s.locals, SchwarzVariant::SORAS);
  const Vector v = random_vector(P.dim(), 41);
  const Vector a = P.apply(v);
  for (int rep = 0; rep < 5; ++rep) CHECK(P.apply(v) == a);
}

TEST_CASE("inconsistent inputs are rejected") {
  Coefficients co;
  const Stack s = build_stack(2, 4, 1, PuKind::PU2, co);
  CHECK_THROWS_AS(SorasPreconditioner({}, s.pu, s.locals, SchwarzVariant::SORAS),
                  std::invalid_argument);
  PartitionOfUnity short_pu;
  short_pu.d.push_back(s.pu.d[0]);
  CHECK_THROWS_AS(SorasPreconditioner(s.subs, short_pu, s.locals, SchwarzVariant::SORAS),
                  std::invalid_argument);
  auto bad_locals = s.locals;
  bad_locals[1] = csr_identity(3);
  CHECK_THROWS_AS(SorasPreconditioner(s.subs, s.pu, bad_locals, SchwarzVariant::SORAS),
                  std::invalid_argument);
  const SorasPreconditioner P(s.subs, s.pu, s.locals, SchwarzVariant::SORAS);
  Vector tiny(3, 0.0);
  CHECK_THROWS_AS(P.apply(tiny), std::invalid_argument);
}
