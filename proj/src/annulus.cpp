#include "rii/annulus.hpp"

#include <cmath>
#include <stdexcept>

namespace rii {

namespace {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(static_cast<size_t>(n));
  weights.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[static_cast<size_t>(i)] = x;
    weights[static_cast<size_t>(i)] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

}  // namespace

double solve_inner_radius(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("parameter a must be positive");
  // p(r) = r^6 + r^4/a^2 - 1 is increasing on (0,1) with p(0) < 0 < p(1).
  const double inv_a2 = 1.0 / (a * a);
  auto p = [&](double r) {
    double r2 = r * r;
    return r2 * r2 * (r2 + inv_a2) - 1.0;
  };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (p(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double r = 0.5 * (lo + hi);
  for (int i = 0; i < 3; ++i) {
    double r2 = r * r, r3 = r2 * r;
    double dp = 6.0 * r2 * r3 + 4.0 * r3 * inv_a2;
    r -= p(r) / dp;
  }
  return r;
}

AnnulusMap make_annulus_map(double a) {
  AnnulusMap m{a, solve_inner_radius(a)};
  if (!(m.r_inner > 0.0 && m.r_inner < 1.0))
    throw std::runtime_error("inner radius outside (0,1)");
  return m;
}

std::array<std::complex<double>, 3> annulus_value(const AnnulusMap& m, std::complex<double> z) {
  return {m.a * z, m.a * z, m.a / (z * z)};
}

std::array<std::complex<double>, 3> annulus_deriv(const AnnulusMap& m, std::complex<double> z) {
  return {std::complex<double>(m.a, 0.0), std::complex<double>(m.a, 0.0), -2.0 * m.a / (z * z * z)};
}

std::array<double, 3> lagrangian_fiber_value(const std::array<std::complex<double>, 3>& w) {
  return {std::norm(w[0]) - std::norm(w[2]), std::norm(w[1]) - std::norm(w[2]),
          std::imag(w[0] * w[1] * w[2])};
}

double annulus_energy_density(const AnnulusMap& m, double rho) {
  double r6 = std::pow(rho, 6);
  return m.a * m.a * (2.0 + 4.0 / r6);
}

double annulus_area(const AnnulusMap& m, int radial_order, int angular_order) {
  if (radial_order < 2 || angular_order < 4) throw std::invalid_argument("quadrature order too low");
  std::vector<double> x, w;
  gauss_legendre(radial_order, x, w);
  // s = ln(rho): integrand rho^2 |u'|^2 evaluated on the log cylinder.
  const double s0 = std::log(m.r_inner), s1 = 0.0;
  double radial = 0.0;
  for (int i = 0; i < radial_order; ++i) {
    double s = 0.5 * (s0 + s1) + 0.5 * (s1 - s0) * x[static_cast<size_t>(i)];
    double rho = std::exp(s);
    radial += w[static_cast<size_t>(i)] * annulus_energy_density(m, rho) * rho * rho;
  }
  radial *= 0.5 * (s1 - s0);
  // Angular direction: periodic trapezoid of a theta-independent integrand.
  double angular = 0.0;
  for (int j = 0; j < angular_order; ++j) angular += 2.0 * M_PI / angular_order;
  return radial * angular;
}

BoundaryLengths annulus_boundary_length(const AnnulusMap& m, int angular_order) {
  if (angular_order < 4) throw std::invalid_argument("quadrature order too low");
  auto circle_len = [&](double rho) {
    // |du/ds| along the circle of radius rho equals |u'|; trapezoid in theta.
    double speed = std::sqrt(annulus_energy_density(m, rho));
    double len = 0.0;
    for (int j = 0; j < angular_order; ++j) len += speed * rho * (2.0 * M_PI / angular_order);
    return len;
  };
  return {circle_len(1.0), circle_len(m.r_inner)};
}

namespace {

// The third fiber coordinate Im(z1 z2 z3) has magnitude a^3 and cancels to
// zero, so the residual is evaluated in extended precision to keep the check
// below the claimed tolerance for large a.
double fiber_residual_impl(const AnnulusMap& m, bool outer, long double eps, int samples) {
  const long double rho = outer ? 1.0L : static_cast<long double>(m.r_inner);
  const std::array<long double, 3> target =
      outer ? std::array<long double, 3>{0.0L, 0.0L, 0.0L}
            : std::array<long double, 3>{-1.0L, -1.0L, 0.0L};
  const long double a = m.a;
  const long double two_pi = 2.0L * 3.14159265358979323846264338327950288L;
  long double worst = 0.0L;
  for (int k = 0; k < samples; ++k) {
    long double th = two_pi * k / samples;
    std::complex<long double> z = std::polar(rho, th);
    std::array<std::complex<long double>, 3> w = {(a + eps) * z, a * z, a / (z * z)};
    std::array<long double, 3> h = {std::norm(w[0]) - std::norm(w[2]),
                                    std::norm(w[1]) - std::norm(w[2]),
                                    std::imag(w[0] * w[1] * w[2])};
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(h[i] - target[i]));
  }
  return static_cast<double>(worst);
}

}  // namespace

double fiber_residual(const AnnulusMap& m, bool outer, int samples) {
  return fiber_residual_impl(m, outer, 0.0L, samples);
}

double fiber_residual_perturbed(const AnnulusMap& m, bool outer, double eps, int samples) {
  return fiber_residual_impl(m, outer, static_cast<long double>(eps), samples);
}

double cauchy_riemann_residual(const AnnulusMap& m, std::complex<double> z) {
  const double x = z.real(), y = z.imag();
  const double q = x * x + y * y;
  if (q < 1e-30) throw std::invalid_argument("evaluation at the puncture");
  const double q3 = q * q * q;
  // u3 = a (x^2 - y^2 - 2ixy) / q^2, partials by the quotient rule.
  const double re_x = m.a * (2.0 * x * q - 4.0 * x * (x * x - y * y)) / q3;
  const double re_y = m.a * (-2.0 * y * q - 4.0 * y * (x * x - y * y)) / q3;
  const double im_x = -2.0 * m.a * (y * q - 4.0 * x * x * y) / q3;
  const double im_y = -2.0 * m.a * (x * q - 4.0 * x * y * y) / q3;
  double res = std::abs(re_x - im_y) + std::abs(re_y + im_x);
  // Consistency with the complex derivative -2a/z^3.
  std::complex<double> du = annulus_deriv(m, z)[2];
  res = std::max(res, std::abs(std::complex<double>(re_x, im_x) - du));
  // First two coordinates are a*z: their Jacobians are exactly conformal.
  return res;
}

PiecewiseScalarField<double> boundary_log_density(const AnnulusMap& m, int samples, double xi) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  std::vector<Component<double>> comps;
  for (bool outer : {true, false}) {
    double rho = outer ? 1.0 : m.r_inner;
    Component<double> c;
    c.kind = ComponentKind::Circle;
    c.length = 2.0 * M_PI * rho;
    double v = std::max(xi, 0.5 * std::log(annulus_energy_density(m, rho)));
    for (int k = 0; k < samples; ++k)
      c.pts.push_back({c.length * k / samples, v});
    comps.push_back(std::move(c));
  }
  return PiecewiseScalarField<double>(std::move(comps), xi);
}

double EnergyDensityField::total_mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * ds * dtheta;
}

EnergyDensityField annulus_cylinder_density(const AnnulusMap& m, int rows, int cols) {
  if (rows < 2 || cols < 2) throw std::invalid_argument("grid too small");
  EnergyDensityField f;
  f.rows = rows;
  f.cols = cols;
  f.s0 = std::log(m.r_inner);
  f.s1 = 0.0;
  f.ds = (f.s1 - f.s0) / rows;
  f.dtheta = 2.0 * M_PI / cols;
  f.values.resize(static_cast<size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i) {
    double s = f.s0 + (i + 0.5) * f.ds;
    double rho = std::exp(s);
    double v = annulus_energy_density(m, rho) * rho * rho;  // conformal factor e^{2s}
    for (int j = 0; j < cols; ++j) f.values[static_cast<size_t>(i) * cols + j] = v;
  }
  return f;
}

EnergyDensityField uniform_density(double value, int rows, int cols, double s0, double s1) {
  if (rows < 1 || cols < 1 || !(s1 > s0)) throw std::invalid_argument("bad grid");
  if (value < 0.0) throw std::invalid_argument("density must be nonnegative");
  EnergyDensityField f;
  f.rows = rows;
  f.cols = cols;
  f.s0 = s0;
  f.s1 = s1;
  f.ds = (s1 - s0) / rows;
  f.dtheta = 2.0 * M_PI / cols;
  f.values.assign(static_cast<size_t>(rows) * cols, value);
  return f;
}

ThickThinCheckReport check_thick_thin(const EnergyDensityField& field, double delta1,
                                      double delta2, double c2, int disk_samples,
                                      int cylinder_splits) {
  if (!(delta1 > 0.0) || !(delta2 > 0.0) || !(c2 > 0.0))
    throw std::invalid_argument("constants must be positive");
  if (disk_samples < 1 || cylinder_splits < 1) throw std::invalid_argument("need positive sample counts");
  ThickThinCheckReport rep;
  rep.delta1 = delta1;
  rep.delta2 = delta2;
  rep.c2 = c2;

  const double cell = std::min(field.ds, field.dtheta);
  const double height = field.s1 - field.s0;
  // Disk radii range over a few dyadic fractions of the cylinder height.
  std::vector<double> radii;
  for (double r = 0.4 * std::min(height, M_PI); r >= 0.05 * std::min(height, M_PI); r *= 0.5)
    radii.push_back(r);
  for (double r : radii)
    if (M_PI * r * r < 4.0 * field.ds * field.dtheta)
      throw std::invalid_argument("grid too coarse for the sampled disks");
  if (!radii.empty() && radii.back() < 2.0 * cell)
    throw std::invalid_argument("grid too coarse for the sampled disks");

  auto density_at = [&](double s, double th) {
    int i = static_cast<int>((s - field.s0) / field.ds);
    int j = static_cast<int>(th / field.dtheta);
    i = std::max(0, std::min(field.rows - 1, i));
    j = ((j % field.cols) + field.cols) % field.cols;
    return field.at(i, j);
  };
  // Disk mass by cell-overlap subsampling; cells can be very anisotropic
  // (short log-cylinders), so counting whole cells by their centers is not
  // enough.
  auto disk_mass = [&](double sc, double thc, double r) {
    double mass = 0.0;
    const int sub = 4;
    const double cell = field.ds * field.dtheta;
    for (int i = 0; i < field.rows; ++i) {
      double s_lo = field.s0 + i * field.ds;
      if (s_lo > sc + r || s_lo + field.ds < sc - r) continue;
      for (int j = 0; j < field.cols; ++j) {
        double th_lo = j * field.dtheta;
        double dth_box = std::abs(th_lo + 0.5 * field.dtheta - thc);
        dth_box = std::min(dth_box, 2.0 * M_PI - dth_box);
        if (dth_box - 0.5 * field.dtheta > r) continue;
        int hits = 0;
        for (int a = 0; a < sub; ++a)
          for (int b = 0; b < sub; ++b) {
            double s = s_lo + (a + 0.5) * field.ds / sub;
            double th = th_lo + (b + 0.5) * field.dtheta / sub;
            double dth = std::abs(th - thc);
            dth = std::min(dth, 2.0 * M_PI - dth);
            if ((s - sc) * (s - sc) + dth * dth <= r * r) ++hits;
          }
        if (hits > 0) mass += field.at(i, j) * cell * hits / (sub * sub);
      }
    }
    return mass;
  };

  // Gradient inequality: flat metric, so r_conf of a disk seen from its
  // center is its radius.
  for (int k = 0; k < disk_samples; ++k) {
    double sc = field.s0 + height * (k + 0.5) / disk_samples;
    double thc = 2.0 * M_PI * ((k * 7) % disk_samples + 0.5) / disk_samples;
    for (double r : radii) {
      if (sc - r < field.s0 || sc + r > field.s1) continue;
      double mu = disk_mass(sc, thc, r);
      if (mu >= delta1) continue;
      ++rep.disks_tested;
      double d = density_at(sc, thc);
      if (mu <= 0.0) {
        if (d > 0.0) ++rep.gradient_violations;
        continue;
      }
      rep.empirical_c1 = std::max(rep.empirical_c1, d * r * r / mu);
    }
  }

  // Cylinder inequality on nested sub-cylinders [s_lo, s_hi] x S^1.
  auto band_mass = [&](double lo, double hi) {
    double mass = 0.0;
    for (int i = 0; i < field.rows; ++i) {
      double s = field.s0 + (i + 0.5) * field.ds;
      if (s < lo || s > hi) continue;
      for (int j = 0; j < field.cols; ++j) mass += field.at(i, j) * field.ds * field.dtheta;
    }
    return mass;
  };
  for (int k = 1; k <= cylinder_splits; ++k) {
    double margin = height * k / (2.0 * (cylinder_splits + 1));
    double lo = field.s0 + margin, hi = field.s1 - margin;
    double mod = hi - lo;
    if (mod <= 2.0 * c2) continue;
    double mu = band_mass(lo, hi);
    if (!(mu < delta2) || mu <= 0.0) continue;
    // Fit mu{C(t,t)} <= e^{-ct} mu{I} over t in (c2, Mod/2).
    double num = 0.0, den = 0.0;
    for (int q = 1; q <= 8; ++q) {
      double t = c2 + (mod / 2.0 - c2) * q / 9.0;
      double inner = band_mass(lo + t, hi - t);
      if (inner <= 0.0) continue;
      double y = -std::log(inner / mu);
      num += y * t;
      den += t * t;
    }
    if (den > 0.0) rep.decay_exponents.push_back(num / den);
  }
  return rep;
}

}  // namespace rii
