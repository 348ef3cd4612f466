#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace rii {

// Collar around a closed geodesic of length l: width w = asinh(1/sinh(l/2)).
double collar_width(double length);

// sinh(InjRad) = cosh(l/2) cosh(d) - sinh(d), d = distance to the collar
// boundary, 0 <= d <= collar_width(l).
double collar_injrad(double length, double d);

// Axially symmetric metric profiles h = d rho^2 + h_theta(rho)^2 d theta^2.
enum class ProfileKind {
  FlatCylinder,  // h_theta == 1 (log-polar flat annulus)
  PolarFlat,     // h_theta = rho        (K = 0 disk)
  Spherical,     // h_theta = sin(rho)   (K = 1, rho < pi)
  Hyperbolic,    // h_theta = sinh(rho)  (K = -1)
  Collar,        // h_theta = l cosh(rho) / 2 pi on [-w, w]
};

struct MetricProfile {
  ProfileKind kind = ProfileKind::FlatCylinder;
  double collar_len = 0.0;  // Collar only

  static MetricProfile flat_cylinder() { return {ProfileKind::FlatCylinder, 0.0}; }
  static MetricProfile polar(int curvature);  // K in {-1, 0, 1}
  static MetricProfile collar(double length);

  double h_theta(double rho) const;
  // Throws std::invalid_argument when [a, b] leaves the profile's domain.
  void check_domain(double a, double b) const;
};

// Conformal length Mod = integral of 1/h_theta over [a, b].
double modulus(const MetricProfile& profile, double a, double b);

// Conformal radius of the geodesic disk B_r seen from its center in constant
// curvature K: exp(log r + int_0^r (1/h_theta - 1/rho) d rho). The integrand's
// removable singularity is handled by a series below rho = 1e-4.
double conformal_radius(int curvature, double r);

struct RatioScanResult {
  double min_ratio = 0.0;       // over the grid; the lower bound is 1/pi
  double max_ratio = 0.0;       // empirical stand-in for the unnamed constant
  double proof_expr_max = 0.0;  // max of b(1/sinh b + sqrt(1/sinh^2 b + 1))/2pi
};

// Scans h_theta(rho) / InjRad over collars for each geodesic length, rho
// sampled across the collar width.
RatioScanResult injrad_ratio_scan(const std::vector<double>& lengths, int rho_steps);

// Geodesic on the flat cylinder [0, L] x S^1 (circumference 2 pi), given as a
// polyline with unwrapped angular coordinate.
struct CylinderPolyline {
  double length = 0.0;                            // the modulus L of the cylinder
  std::vector<std::pair<double, double>> points;  // (s, theta), theta lifted
};

struct TameResult {
  bool tame = false;
  double required_k = 0.0;  // max over probed sub-cylinders of len / (2 pi max(Mod, 1))
  double worst_lo = 0.0, worst_hi = 0.0;
};

TameResult is_k_tame(const CylinderPolyline& geodesic, double k, int subcylinder_probes);

CylinderPolyline longitudinal_geodesic(double cylinder_len, double theta, int samples = 2);
CylinderPolyline helix_geodesic(double cylinder_len, int windings, int samples = 256);

// Complete weighted graph over boundary components; infinity marks a missing
// bridge.
struct BridgeGraph {
  int n = 0;
  std::vector<double> w;  // row-major n x n

  static BridgeGraph complete(int n, double init);
  double at(int i, int j) const { return w[static_cast<size_t>(i) * n + j]; }
  void set(int i, int j, double v);
};

using ExchangeOracle = std::function<std::optional<double>(int, int, double)>;

struct ChainResult {
  std::vector<std::pair<int, int>> mst_edges;
  double mst_length = 0.0;
  std::vector<int> path;  // unique tree path between the query vertices
};

// Minimum spanning tree (lexicographic tie-break on (length, i, j)) and the
// tree path between two vertices. When an exchange oracle is supplied it is
// queried on every tree edge; a strictly shorter replacement is an input
// contradiction and throws.
ChainResult admissible_chain(const BridgeGraph& g, int from, int to,
                             const ExchangeOracle& exchange = nullptr);

}  // namespace rii
