#include "soraslab/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace soras {

std::array<double, 2> Coefficients::velocity_at(double x, double y) const {
  switch (velocity) {
    case VelocityKind::Zero:
      return {0.0, 0.0};
    case VelocityKind::Rotating:
      return {-2.0 * std::numbers::pi * (y - 0.1), 2.0 * std::numbers::pi * (x - 0.5)};
    case VelocityKind::NegDiv:
      return {-x, -y};
    case VelocityKind::Normal:
      return {1.0, 0.0};
    case VelocityKind::Custom:
      return custom_a(x, y);
  }
  return {0.0, 0.0};
}

double Coefficients::div_a(double x, double y) const {
  switch (velocity) {
    case VelocityKind::NegDiv:
      return -2.0;
    case VelocityKind::Custom:
      return custom_div_a(x, y);
    default:
      return 0.0;
  }
}

double SourceTerm::value(double x, double y) const {
  const double dx = x - x0, dy = y - y0;
  return amplitude * std::exp(-exponent * (dx * dx + dy * dy));
}

double robin_alpha(double a_dot_n, double c0, double nu) {
  const double radicand = a_dot_n * a_dot_n + 4.0 * c0 * nu;
  if (radicand < 0.0)
    throw std::domain_error("robin_alpha: (a.n)^2 + 4*c0*nu is negative");
  return 0.5 * std::sqrt(radicand);
}

double supg_tau(double a_norm, double h_k, double nu) {
  if (a_norm * h_k < 1e-12) return h_k * h_k / (12.0 * nu);
  const double pe = a_norm * h_k / (2.0 * nu);
  double zeta;
  if (pe < 1e-4)  // series for coth(Pe) - 1/Pe, avoids cancellation
    zeta = pe / 3.0 - pe * pe * pe / 45.0;
  else
    zeta = 1.0 / std::tanh(pe) - 1.0 / pe;
  return h_k / (2.0 * a_norm) * zeta;
}

namespace {

struct ElementGeometry {
  std::array<double, 2> p[3];
  std::array<double, 2> grad[3];  // constant P1 basis gradients
  std::array<double, 2> quad[3];  // edge midpoints, weight area/3 each
  double area;
  double h_k;  // longest edge
};

ElementGeometry element_geometry(const Mesh& mesh, int t) {
  ElementGeometry g;
  const auto& tri = mesh.triangles[t];
  for (int i = 0; i < 3; ++i) g.p[i] = mesh.nodes[tri[i]];
  const double two_a = (g.p[1][0] - g.p[0][0]) * (g.p[2][1] - g.p[0][1]) -
                       (g.p[2][0] - g.p[0][0]) * (g.p[1][1] - g.p[0][1]);
  g.area = 0.5 * two_a;
  for (int i = 0; i < 3; ++i) {
    const auto& pa = g.p[(i + 1) % 3];
    const auto& pb = g.p[(i + 2) % 3];
    g.grad[i] = {(pa[1] - pb[1]) / two_a, (pb[0] - pa[0]) / two_a};
  }
  double hmax = 0.0;
  for (int i = 0; i < 3; ++i) {
    const auto& pa = g.p[i];
    const auto& pb = g.p[(i + 1) % 3];
    g.quad[i] = {0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])};
    hmax = std::max(hmax, std::hypot(pb[0] - pa[0], pb[1] - pa[1]));
  }
  g.h_k = hmax;
  return g;
}

// basis values at the edge midpoints: quad[q] is the midpoint of edge (q, q+1)
constexpr double kMidBasis[3][3] = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};

void element_matrix(const Mesh& mesh, int t, const Coefficients& coeffs, double K[3][3]) {
  const ElementGeometry g = element_geometry(mesh, t);
  const double wq = g.area / 3.0;

  double tau = 0.0;
  if (coeffs.supg) {
    const double cx = (g.p[0][0] + g.p[1][0] + g.p[2][0]) / 3.0;
    const double cy = (g.p[0][1] + g.p[1][1] + g.p[2][1]) / 3.0;
    const auto ac = coeffs.velocity_at(cx, cy);
    tau = supg_tau(std::hypot(ac[0], ac[1]), g.h_k, coeffs.nu);
  }

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) K[i][j] = coeffs.nu * g.area *
        (g.grad[i][0] * g.grad[j][0] + g.grad[i][1] * g.grad[j][1]);

  for (int q = 0; q < 3; ++q) {
    const auto a = coeffs.velocity_at(g.quad[q][0], g.quad[q][1]);
    const double ct = coeffs.c_tilde(g.quad[q][0], g.quad[q][1]);
    double adg[3];
    for (int i = 0; i < 3; ++i) adg[i] = a[0] * g.grad[i][0] + a[1] * g.grad[i][1];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double v = ct * kMidBasis[q][i] * kMidBasis[q][j] +
                   0.5 * adg[j] * kMidBasis[q][i] - 0.5 * kMidBasis[q][j] * adg[i];
        if (coeffs.supg) v += tau * adg[j] * adg[i];
        K[i][j] += wq * v;
      }
  }
}

void element_rhs(const Mesh& mesh, int t, const Coefficients& coeffs, const SourceTerm& source,
                 double r[3]) {
  const ElementGeometry g = element_geometry(mesh, t);
  const double wq = g.area / 3.0;

  double tau = 0.0;
  if (coeffs.supg) {
    const double cx = (g.p[0][0] + g.p[1][0] + g.p[2][0]) / 3.0;
    const double cy = (g.p[0][1] + g.p[1][1] + g.p[2][1]) / 3.0;
    const auto ac = coeffs.velocity_at(cx, cy);
    tau = supg_tau(std::hypot(ac[0], ac[1]), g.h_k, coeffs.nu);
  }

  r[0] = r[1] = r[2] = 0.0;
  for (int q = 0; q < 3; ++q) {
    const double f = source.value(g.quad[q][0], g.quad[q][1]);
    if (coeffs.supg) {
      const auto a = coeffs.velocity_at(g.quad[q][0], g.quad[q][1]);
      for (int i = 0; i < 3; ++i) {
        const double adg = a[0] * g.grad[i][0] + a[1] * g.grad[i][1];
        r[i] += wq * f * (kMidBasis[q][i] + tau * adg);
      }
    } else {
      for (int i = 0; i < 3; ++i) r[i] += wq * f * kMidBasis[q][i];
    }
  }
}

void check_coeffs(const Coefficients& coeffs) {
  if (!(coeffs.nu > 0.0)) throw std::invalid_argument("assembly: nu must be positive");
  if (coeffs.velocity == VelocityKind::Custom && (!coeffs.custom_a || !coeffs.custom_div_a))
    throw std::invalid_argument("assembly: custom velocity needs both field and divergence");
}

}  // namespace

AssembledSystem assemble_global(const Mesh& mesh, const Coefficients& coeffs,
                                const SourceTerm& source) {
  check_coeffs(coeffs);
  const int n = mesh.node_count();
  CooBuilder coo(n, n);
  Vector rhs(n, 0.0);

  double K[3][3], r[3];
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    element_matrix(mesh, t, coeffs, K);
    element_rhs(mesh, t, coeffs, source, r);
    const auto& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) {
      if (mesh.boundary_node[tri[i]]) continue;
      rhs[tri[i]] += r[i];
      for (int j = 0; j < 3; ++j)
        if (!mesh.boundary_node[tri[j]]) coo.add(tri[i], tri[j], K[i][j]);
    }
  }
  for (int i = 0; i < n; ++i)
    if (mesh.boundary_node[i]) coo.add(i, i, 1.0);

  return {coo.compress(), std::move(rhs)};
}

CsrMatrix assemble_local(const Mesh& mesh, const Subdomain& sub, const Coefficients& coeffs) {
  check_coeffs(coeffs);
  const bool full_width = sub.col_begin == 0 && sub.col_end == mesh.nx;
  if (sub.left_interface_col < 0 && sub.right_interface_col < 0 && !full_width)
    throw std::invalid_argument("assemble_local: subdomain has no interface yet is not the whole domain");

  std::vector<int> local(mesh.node_count(), -1);
  for (int i = 0; i < sub.n(); ++i) local[sub.nodes[i]] = i;

  CooBuilder coo(sub.n(), sub.n());
  double K[3][3];
  for (int t : sub.elements) {
    element_matrix(mesh, t, coeffs, K);
    const auto& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) {
      if (mesh.boundary_node[tri[i]]) continue;
      for (int j = 0; j < 3; ++j)
        if (!mesh.boundary_node[tri[j]]) coo.add(local[tri[i]], local[tri[j]], K[i][j]);
    }
  }

  // Robin term on the vertical interface lines, Simpson rule per edge
  const double h = mesh.h;
  auto add_interface = [&](int col, double normal_x) {
    const double x = (0.2 * col) / mesh.ny;
    for (int row = 0; row < mesh.ny; ++row) {
      const int g1 = mesh.node_id(col, row);
      const int g2 = mesh.node_id(col, row + 1);
      const double y1 = (0.2 * row) / mesh.ny;
      const double y2 = (0.2 * (row + 1)) / mesh.ny;
      const double ym = 0.5 * (y1 + y2);
      const double a1 = robin_alpha(coeffs.velocity_at(x, y1)[0] * normal_x, coeffs.c0, coeffs.nu);
      const double am = robin_alpha(coeffs.velocity_at(x, ym)[0] * normal_x, coeffs.c0, coeffs.nu);
      const double a2 = robin_alpha(coeffs.velocity_at(x, y2)[0] * normal_x, coeffs.c0, coeffs.nu);
      const double e11 = h / 6.0 * (a1 + am);
      const double e12 = h / 6.0 * am;
      const double e22 = h / 6.0 * (a2 + am);
      if (!mesh.boundary_node[g1]) coo.add(local[g1], local[g1], e11);
      if (!mesh.boundary_node[g1] && !mesh.boundary_node[g2]) {
        coo.add(local[g1], local[g2], e12);
        coo.add(local[g2], local[g1], e12);
      }
      if (!mesh.boundary_node[g2]) coo.add(local[g2], local[g2], e22);
    }
  };
  if (sub.left_interface_col >= 0) add_interface(sub.left_interface_col, -1.0);
  if (sub.right_interface_col >= 0) add_interface(sub.right_interface_col, 1.0);

  for (int i = 0; i < sub.n(); ++i)
    if (mesh.boundary_node[sub.nodes[i]]) coo.add(i, i, 1.0);

  return coo.compress();
}

double c_tilde_min(const Mesh& mesh, const Coefficients& coeffs) {
  double cmin = std::numeric_limits<double>::infinity();
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    double cx = 0.0, cy = 0.0;
    for (int i = 0; i < 3; ++i) {
      cx += mesh.nodes[tri[i]][0];
      cy += mesh.nodes[tri[i]][1];
    }
    cmin = std::min(cmin, coeffs.c_tilde(cx / 3.0, cy / 3.0));
  }
  return cmin;
}

}  // namespace soras
