#include "rii/projective.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace rii {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// Box-Muller on raw mt19937_64 bits; the std distributions are not pinned
// across standard library implementations.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;  // (0,1)
    double u2 = (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
    double m = std::sqrt(-2.0 * std::log(u1));
    spare_ = m * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return m * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace

void validate_curve(const ProjectiveCurve& curve) {
  if (curve.dim < 1) throw std::invalid_argument("curve dimension must be >= 1");
  if (curve.points.size() < 2) throw std::invalid_argument("curve needs at least two points");
  const size_t m = static_cast<size_t>(curve.dim) + 1;
  for (const auto& p : curve.points) {
    if (p.size() != m) throw std::invalid_argument("point dimension mismatch");
    for (double v : p)
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite coordinate");
    if (std::abs(norm(p) - 1.0) > 1e-12) throw std::invalid_argument("curve points must be unit vectors");
  }
  const size_t n = curve.points.size();
  const size_t last = curve.closed ? n : n - 1;
  for (size_t i = 0; i + 1 <= last; ++i) {
    const auto& p = curve.points[i % n];
    const auto& q = curve.points[(i + 1) % n];
    if (std::abs(dot(p, q)) <= 1e-12)
      throw std::invalid_argument("consecutive points are antipodally ambiguous");
  }
}

int count_intersections(const ProjectiveCurve& curve, const Hyperplane& h) {
  const size_t n = curve.points.size();
  // Walk the sign-aligned lift, tracking only the running sign and dot value.
  double sign = 1.0;
  double prev = dot(curve.points[0], h.normal);
  if (std::abs(prev) < 1e-14) throw std::invalid_argument("degenerate incidence: vertex on hyperplane");
  double first = prev;
  int changes = 0;
  for (size_t i = 1; i < n; ++i) {
    double align = dot(curve.points[i - 1], curve.points[i]);
    sign = (align < 0.0) ? -sign : sign;
    double cur = sign * dot(curve.points[i], h.normal);
    if (std::abs(cur) < 1e-14) throw std::invalid_argument("degenerate incidence: vertex on hyperplane");
    if (prev * cur < 0.0) ++changes;
    prev = cur;
  }
  if (curve.closed) {
    double align = dot(curve.points[n - 1], curve.points[0]);
    sign = (align < 0.0) ? -sign : sign;
    double cur = sign * first;
    if (prev * cur < 0.0) ++changes;
  }
  return changes;
}

double normalized_length(const ProjectiveCurve& curve) {
  const size_t n = curve.points.size();
  double total = 0.0;
  const size_t last = curve.closed ? n : n - 1;
  for (size_t i = 0; i < last; ++i) {
    double d = std::abs(dot(curve.points[i], curve.points[(i + 1) % n]));
    total += std::acos(std::min(1.0, d));
  }
  return total / M_PI;
}

CroftonEstimate crofton_length(const ProjectiveCurve& curve, long long n_samples,
                               std::uint64_t seed, std::vector<int>* counts) {
  if (n_samples < 100) throw std::invalid_argument("need at least 100 samples");
  validate_curve(curve);
  GaussianStream gauss(seed);
  const int m = curve.dim + 1;

  CroftonEstimate est;
  est.samples = n_samples;
  est.exact_length = normalized_length(curve);
  if (counts) counts->reserve(static_cast<size_t>(n_samples));

  double sum = 0.0, sumsq = 0.0;
  Hyperplane h;
  h.normal.resize(static_cast<size_t>(m));
  for (long long i = 0; i < n_samples; ++i) {
    int c = 0;
    while (true) {
      double nn = 0.0;
      for (int j = 0; j < m; ++j) {
        h.normal[static_cast<size_t>(j)] = gauss.next();
        nn += h.normal[static_cast<size_t>(j)] * h.normal[static_cast<size_t>(j)];
      }
      if (nn < 1e-12) {
        ++est.resamples;
        continue;
      }
      double inv = 1.0 / std::sqrt(nn);
      for (auto& v : h.normal) v *= inv;
      try {
        c = count_intersections(curve, h);
        break;
      } catch (const std::invalid_argument&) {
        ++est.resamples;
      }
    }
    if (counts) counts->push_back(c);
    sum += c;
    sumsq += static_cast<double>(c) * c;
  }
  double nd = static_cast<double>(n_samples);
  est.mean = sum / nd;
  double var = (sumsq - nd * est.mean * est.mean) / (nd - 1.0);
  est.std_error = var > 0.0 ? std::sqrt(var / nd) : 0.0;
  return est;
}

ProjectiveRiiCheck verify_projective_rii(const ProjectiveCurve& boundary, int degree, double tol) {
  if (degree <= 0) throw std::invalid_argument("degree must be positive");
  ProjectiveRiiCheck chk;
  chk.lhs = static_cast<double>(degree);  // 2*pi * (d / 2*pi)
  chk.rhs = normalized_length(boundary);
  chk.pass = chk.lhs >= chk.rhs - tol;
  return chk;
}

ProjectiveCurve line_curve(int samples, int dim) {
  if (samples < 4 || dim < 1) throw std::invalid_argument("bad line parameters");
  ProjectiveCurve c;
  c.dim = dim;
  c.closed = true;
  for (int k = 0; k < samples; ++k) {
    double th = M_PI * k / samples;  // [0, pi): one projective period
    std::vector<double> p(static_cast<size_t>(dim) + 1, 0.0);
    p[0] = std::cos(th);
    p[1] = std::sin(th);
    c.points.push_back(std::move(p));
  }
  return c;
}

ProjectiveCurve conic_curve(int samples) {
  if (samples < 8) throw std::invalid_argument("bad conic parameters");
  ProjectiveCurve c;
  c.dim = 2;
  c.closed = true;
  const double s = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < samples; ++k) {
    double th = 2.0 * M_PI * k / samples;
    c.points.push_back({s * std::cos(th), s * std::sin(th), s});
  }
  return c;
}

ProjectiveCurve cubic_curve(int samples) {
  if (samples < 16) throw std::invalid_argument("bad cubic parameters");
  ProjectiveCurve c;
  c.dim = 3;
  c.closed = true;
  for (int k = 0; k < samples; ++k) {
    // t sweeps the real line once; offset by half a step to keep t finite.
    double th = M_PI * (k + 0.5) / samples - M_PI / 2.0;
    double t = std::tan(th);
    std::vector<double> p = {1.0, t, t * t, t * t * t};
    double inv = 1.0 / norm(p);
    for (auto& v : p) v *= inv;
    c.points.push_back(std::move(p));
  }
  return c;
}

}  // namespace rii
