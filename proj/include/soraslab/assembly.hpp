#pragma once
#include <array>
#include <functional>

#include "soraslab/decomp.hpp"
#include "soraslab/linalg.hpp"
#include "soraslab/mesh.hpp"

namespace soras {

enum class VelocityKind { Zero, Rotating, NegDiv, Normal, Custom };

/// Problem coefficients for c~ u + div(a u) - div(nu grad u) = f with the
/// skew-symmetric convection splitting, c~ = c0 + div(a)/2. The built-in
/// velocity fields carry their divergence analytically.
struct Coefficients {
  double c0 = 1.0;
  double nu = 1.0;
  VelocityKind velocity = VelocityKind::Zero;
  bool supg = false;
  std::function<std::array<double, 2>(double, double)> custom_a;
  std::function<double(double, double)> custom_div_a;

  std::array<double, 2> velocity_at(double x, double y) const;
  double div_a(double x, double y) const;
  double c_tilde(double x, double y) const { return c0 + 0.5 * div_a(x, y); }
};

/// Gaussian load f = amplitude * exp(-exponent*((x-x0)^2 + (y-y0)^2)).
struct SourceTerm {
  double x0 = 0.5, y0 = 0.1;
  double amplitude = 100.0;
  double exponent = 10.0;

  double value(double x, double y) const;
};

// Absorbing interface coefficient sqrt((a.n)^2 + 4*c0*nu)/2; throws
// std::domain_error on a negative radicand instead of clamping.
double robin_alpha(double a_dot_n, double c0, double nu);

// Streamline-diffusion parameter tau_K = (h_K/(2|a|)) (coth(Pe) - 1/Pe)
// with Pe = |a| h_K / (2 nu); limits to h_K^2/(12 nu) as |a| h_K -> 0.
double supg_tau(double a_norm, double h_k, double nu);

struct AssembledSystem {
  CsrMatrix A;
  Vector rhs;
};

// Global P1 system with homogeneous Dirichlet conditions on the whole
// boundary imposed by symmetric elimination (unit diagonal rows kept).
AssembledSystem assemble_global(const Mesh& mesh, const Coefficients& coeffs,
                                const SourceTerm& source);

// Local matrix B_j over the subdomain's node ordering: the volume form on
// its elements plus the Robin mass term on interface lines; Dirichlet
// elimination only on global-boundary nodes.
CsrMatrix assemble_local(const Mesh& mesh, const Subdomain& sub, const Coefficients& coeffs);

// Minimum of c~ over element centroids; the harness logs it to flag runs
// where the coercivity hypothesis c~ > 0 fails.
double c_tilde_min(const Mesh& mesh, const Coefficients& coeffs);

}  // namespace soras
