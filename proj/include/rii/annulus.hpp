#pragma once

#include "rii/field.hpp"

#include <array>
#include <complex>
#include <vector>

namespace rii {

// The holomorphic annulus family z -> (a z, a z, a / z^2) on r_a <= |z| <= 1,
// with boundary circles on the special Lagrangian fibers H^{-1}(0,0,0) and
// H^{-1}(-1,-1,0). Mod(annulus) = ln(1/r_inner) in the [0,m] x S^1 convention.
struct AnnulusMap {
  double a = 1.0;
  double r_inner = 0.0;  // the positive root of a^2 r^6 + r^4 - a^2 in (0,1)
};

// Root of a^2 r^6 + r^4 - a^2 on (0,1): bisection then a Newton polish.
double solve_inner_radius(double a);

AnnulusMap make_annulus_map(double a);

std::array<std::complex<double>, 3> annulus_value(const AnnulusMap& m, std::complex<double> z);
std::array<std::complex<double>, 3> annulus_deriv(const AnnulusMap& m, std::complex<double> z);

// H(z1,z2,z3) = (|z1|^2-|z3|^2, |z2|^2-|z3|^2, Im(z1 z2 z3)).
std::array<double, 3> lagrangian_fiber_value(const std::array<std::complex<double>, 3>& w);

// |u'|^2 = a^2 (2 + 4/|z|^6); area = energy for holomorphic maps.
double annulus_energy_density(const AnnulusMap& m, double rho);

// Tensor quadrature of the energy density over the annulus, Gauss-Legendre in
// the log-radial coordinate times periodic trapezoid in the angle.
double annulus_area(const AnnulusMap& m, int radial_order = 64, int angular_order = 256);

struct BoundaryLengths {
  double outer = 0.0;  // closed form 2*pi*a*sqrt(6)
  double inner = 0.0;  // 2*pi*a*sqrt(2 r^2 + 4/r^4)
};
BoundaryLengths annulus_boundary_length(const AnnulusMap& m, int angular_order = 256);

// Max over boundary samples of |H(u(z)) - c|_inf for the matching fiber value.
double fiber_residual(const AnnulusMap& m, bool outer, int samples = 256);

// Residual of the same map with `a` perturbed in the first coordinate only;
// positive for eps != 0 (negative control for the fiber check).
double fiber_residual_perturbed(const AnnulusMap& m, bool outer, double eps, int samples = 256);

// Cauchy-Riemann defect of the real Jacobian assembled from independent
// real partial-derivative formulas; ~1e-15 for this family, guards the
// evaluators against sign and wiring mistakes.
double cauchy_riemann_residual(const AnnulusMap& m, std::complex<double> z);

// ln |du| along each boundary circle (constant in the angle for this family),
// packaged as a two-circle field over the flat boundary metric, clamped at
// the base level xi.
PiecewiseScalarField<double> boundary_log_density(const AnnulusMap& m, int samples, double xi);

// Sampled nonnegative density over the flat cylinder [s0, s1] x [0, 2pi),
// row-major, cell sizes ds x dtheta; cell (i, j) is centered at
// (s0 + (i+1/2) ds, (j+1/2) dtheta).
struct EnergyDensityField {
  int rows = 0, cols = 0;
  double s0 = 0.0, s1 = 0.0;
  double ds = 0.0, dtheta = 0.0;
  std::vector<double> values;

  double at(int i, int j) const { return values[static_cast<size_t>(i) * cols + j]; }
  double total_mass() const;
};

// Pullback of the annulus energy density to the flat cylinder s = ln rho:
// density(s, theta) = |u'(e^{s+i theta})|^2 e^{2s}.
EnergyDensityField annulus_cylinder_density(const AnnulusMap& m, int rows, int cols);

EnergyDensityField uniform_density(double value, int rows, int cols, double s0, double s1);

struct ThickThinCheckReport {
  double empirical_c1 = 0.0;       // max density(center) r_conf^2 / mu(U) over small disks
  long long disks_tested = 0;
  long long gradient_violations = 0;  // disks with mu(U)=0 but positive density (no finite c1)
  std::vector<double> decay_exponents;  // fitted per tested sub-cylinder
  double delta1 = 0.0, delta2 = 0.0, c2 = 0.0;
};

// Empirical check of the gradient and cylinder inequalities on a flat grid;
// reports ratios and fitted exponents, never asserts the abstract constants.
// Throws when the grid is too coarse for the smallest sampled disk.
ThickThinCheckReport check_thick_thin(const EnergyDensityField& field, double delta1,
                                      double delta2, double c2, int disk_samples,
                                      int cylinder_splits);

}  // namespace rii
