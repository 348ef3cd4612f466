#include "rii/hyperbolic.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rii {

double collar_width(double length) {
  if (!(length > 0.0)) throw std::invalid_argument("geodesic length must be positive");
  return std::asinh(1.0 / std::sinh(0.5 * length));
}

double collar_injrad(double length, double d) {
  if (!(length > 0.0)) throw std::invalid_argument("geodesic length must be positive");
  double w = collar_width(length);
  if (d < -1e-12 || d > w + 1e-12) throw std::invalid_argument("distance outside the collar");
  d = std::max(d, 0.0);
  return std::asinh(std::cosh(0.5 * length) * std::cosh(d) - std::sinh(d));
}

MetricProfile MetricProfile::polar(int curvature) {
  switch (curvature) {
    case 0: return {ProfileKind::PolarFlat, 0.0};
    case 1: return {ProfileKind::Spherical, 0.0};
    case -1: return {ProfileKind::Hyperbolic, 0.0};
    default: throw std::invalid_argument("curvature must be -1, 0 or 1");
  }
}

MetricProfile MetricProfile::collar(double length) {
  if (!(length > 0.0)) throw std::invalid_argument("geodesic length must be positive");
  return {ProfileKind::Collar, length};
}

double MetricProfile::h_theta(double rho) const {
  switch (kind) {
    case ProfileKind::FlatCylinder: return 1.0;
    case ProfileKind::PolarFlat: return rho;
    case ProfileKind::Spherical: return std::sin(rho);
    case ProfileKind::Hyperbolic: return std::sinh(rho);
    case ProfileKind::Collar: return collar_len * std::cosh(rho) / (2.0 * M_PI);
  }
  return 0.0;
}

void MetricProfile::check_domain(double a, double b) const {
  if (!(a < b)) throw std::invalid_argument("empty interval");
  switch (kind) {
    case ProfileKind::FlatCylinder: return;
    case ProfileKind::PolarFlat:
    case ProfileKind::Hyperbolic:
      if (a <= 0.0) throw std::invalid_argument("polar profile needs rho > 0");
      return;
    case ProfileKind::Spherical:
      if (a <= 0.0 || b >= M_PI) throw std::invalid_argument("spherical profile needs 0 < rho < pi");
      return;
    case ProfileKind::Collar: {
      double w = collar_width(collar_len);
      if (a < -w - 1e-12 || b > w + 1e-12)
        throw std::invalid_argument("interval outside the collar");
      return;
    }
  }
}

double modulus(const MetricProfile& profile, double a, double b) {
  profile.check_domain(a, b);
  if (profile.kind == ProfileKind::FlatCylinder) return b - a;
  auto f = [&](double rho) { return 1.0 / profile.h_theta(rho); };
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 12, 1e-12);
}

double conformal_radius(int curvature, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  if (curvature == 0) return r;
  if (curvature == 1 && r >= M_PI) throw std::invalid_argument("spherical radius must be < pi");
  if (curvature != 1 && curvature != -1) throw std::invalid_argument("curvature must be -1, 0 or 1");

  // integrand g(rho) = 1/h_theta - 1/rho; |g| ~ rho/6 near 0.
  auto g = [&](double rho) {
    return (curvature == 1 ? 1.0 / std::sin(rho) : 1.0 / std::sinh(rho)) - 1.0 / rho;
  };
  const double cut = 1e-4;
  double integral = 0.0;
  double head = std::min(r, cut);
  {
    // Series antiderivative: +-x^2/12 + 7x^4/1440 + O(x^6).
    double sgn = (curvature == 1) ? 1.0 : -1.0;
    integral += sgn * head * head / 12.0 + 7.0 * std::pow(head, 4) / 1440.0;
  }
  if (r > cut)
    integral += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, cut, r, 12, 1e-13);
  return std::exp(std::log(r) + integral);
}

RatioScanResult injrad_ratio_scan(const std::vector<double>& lengths, int rho_steps) {
  if (lengths.empty() || rho_steps < 1) throw std::invalid_argument("empty scan grid");
  RatioScanResult res;
  res.min_ratio = std::numeric_limits<double>::infinity();
  for (double l : lengths) {
    double w = collar_width(l);
    MetricProfile prof = MetricProfile::collar(l);
    for (int j = 0; j < rho_steps; ++j) {
      double rho = (rho_steps == 1) ? 0.0 : w * j / (rho_steps - 1);
      double ratio = prof.h_theta(rho) / collar_injrad(l, w - rho);
      res.min_ratio = std::min(res.min_ratio, ratio);
      res.max_ratio = std::max(res.max_ratio, ratio);
    }
    double b = 0.5 * l;
    double expr = b * (1.0 / std::sinh(b) + std::sqrt(1.0 / (std::sinh(b) * std::sinh(b)) + 1.0)) /
                  (2.0 * M_PI);
    res.proof_expr_max = std::max(res.proof_expr_max, expr);
  }
  return res;
}

TameResult is_k_tame(const CylinderPolyline& geodesic, double k, int subcylinder_probes) {
  if (!(geodesic.length > 0.0)) throw std::invalid_argument("cylinder length must be positive");
  if (!(k > 0.0)) throw std::invalid_argument("k must be positive");
  if (subcylinder_probes < 1) throw std::invalid_argument("need at least one probe");
  for (const auto& [s, th] : geodesic.points)
    if (s < -1e-12 || s > geodesic.length + 1e-12)
      throw std::invalid_argument("polyline leaves the cylinder");

  auto clipped_length = [&](double lo, double hi) {
    double len = 0.0;
    const auto& pts = geodesic.points;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      double s0 = pts[i].first, t0 = pts[i].second;
      double s1 = pts[i + 1].first, t1 = pts[i + 1].second;
      double a = 0.0, b = 1.0;  // parameter range intersecting [lo, hi]
      double ds = s1 - s0;
      if (std::abs(ds) < 1e-300) {
        if (s0 < lo || s0 > hi) continue;
      } else {
        double ta = (lo - s0) / ds, tb = (hi - s0) / ds;
        if (ta > tb) std::swap(ta, tb);
        a = std::max(0.0, ta);
        b = std::min(1.0, tb);
        if (a >= b) continue;
      }
      double seg = std::hypot(ds, t1 - t0);
      len += seg * (b - a);
    }
    return len;
  };

  TameResult res;
  for (int i = 0; i <= subcylinder_probes; ++i) {
    for (int j = i + 1; j <= subcylinder_probes; ++j) {
      double lo = geodesic.length * i / subcylinder_probes;
      double hi = geodesic.length * j / subcylinder_probes;
      double mod = hi - lo;
      double need = clipped_length(lo, hi) / (2.0 * M_PI * std::max(mod, 1.0));
      if (need > res.required_k) {
        res.required_k = need;
        res.worst_lo = lo;
        res.worst_hi = hi;
      }
    }
  }
  res.tame = res.required_k <= k + 1e-12;
  return res;
}

CylinderPolyline longitudinal_geodesic(double cylinder_len, double theta, int samples) {
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  CylinderPolyline p;
  p.length = cylinder_len;
  for (int i = 0; i < samples; ++i)
    p.points.push_back({cylinder_len * i / (samples - 1), theta});
  return p;
}

CylinderPolyline helix_geodesic(double cylinder_len, int windings, int samples) {
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  CylinderPolyline p;
  p.length = cylinder_len;
  for (int i = 0; i < samples; ++i) {
    double t = static_cast<double>(i) / (samples - 1);
    p.points.push_back({cylinder_len * t, 2.0 * M_PI * windings * t});
  }
  return p;
}

BridgeGraph BridgeGraph::complete(int n, double init) {
  if (n < 1) throw std::invalid_argument("graph needs vertices");
  BridgeGraph g;
  g.n = n;
  g.w.assign(static_cast<size_t>(n) * n, init);
  for (int i = 0; i < n; ++i) g.w[static_cast<size_t>(i) * n + i] = 0.0;
  return g;
}

void BridgeGraph::set(int i, int j, double v) {
  if (i < 0 || j < 0 || i >= n || j >= n || i == j) throw std::invalid_argument("bad edge");
  if (!(v > 0.0)) throw std::invalid_argument("bridge lengths must be positive");
  w[static_cast<size_t>(i) * n + j] = v;
  w[static_cast<size_t>(j) * n + i] = v;
}

ChainResult admissible_chain(const BridgeGraph& g, int from, int to,
                             const ExchangeOracle& exchange) {
  if (from < 0 || to < 0 || from >= g.n || to >= g.n)
    throw std::invalid_argument("query vertex out of range");
  if (from == to) throw std::invalid_argument("query vertices must be distinct");

  struct Edge {
    double len;
    int i, j;
  };
  std::vector<Edge> edges;
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j) {
      double v = g.at(i, j);
      if (std::isfinite(v)) {
        if (!(v > 0.0)) throw std::invalid_argument("bridge lengths must be positive");
        edges.push_back({v, i, j});
      }
    }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.len != b.len) return a.len < b.len;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  std::vector<int> parent(static_cast<size_t>(g.n));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) {
    while (parent[static_cast<size_t>(v)] != v) {
      parent[static_cast<size_t>(v)] = parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
      v = parent[static_cast<size_t>(v)];
    }
    return v;
  };

  ChainResult res;
  std::vector<std::vector<int>> adj(static_cast<size_t>(g.n));
  for (const Edge& e : edges) {
    int a = find(e.i), b = find(e.j);
    if (a == b) continue;
    parent[static_cast<size_t>(a)] = b;
    res.mst_edges.push_back({e.i, e.j});
    res.mst_length += e.len;
    adj[static_cast<size_t>(e.i)].push_back(e.j);
    adj[static_cast<size_t>(e.j)].push_back(e.i);
  }
  if (static_cast<int>(res.mst_edges.size()) != g.n - 1)
    throw std::invalid_argument("bridge graph is disconnected");

  if (exchange) {
    for (const auto& [i, j] : res.mst_edges) {
      auto better = exchange(i, j, g.at(i, j));
      if (better && *better < g.at(i, j))
        throw std::runtime_error("exchange oracle found a shorter bridge on a tree edge");
    }
  }

  // Unique tree path from..to by DFS.
  std::vector<int> prev(static_cast<size_t>(g.n), -1);
  std::vector<int> stack{from};
  prev[static_cast<size_t>(from)] = from;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (v == to) break;
    for (int u : adj[static_cast<size_t>(v)])
      if (prev[static_cast<size_t>(u)] == -1) {
        prev[static_cast<size_t>(u)] = v;
        stack.push_back(u);
      }
  }
  for (int v = to; v != from; v = prev[static_cast<size_t>(v)]) res.path.push_back(v);
  res.path.push_back(from);
  std::reverse(res.path.begin(), res.path.end());
  return res;
}

}  // namespace rii
