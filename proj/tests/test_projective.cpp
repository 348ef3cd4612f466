#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rii/projective.hpp"

#include <cmath>
#include <random>

using namespace rii;

namespace {

// Rotate a curve by a seeded random orthogonal matrix (Gram-Schmidt on a
// gaussian matrix built from raw mt19937_64 bits).
ProjectiveCurve rotate_curve(const ProjectiveCurve& c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto u01 = [&] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
  auto gauss = [&] {
    return std::sqrt(-2.0 * std::log(u01())) * std::cos(2.0 * M_PI * u01());
  };
  const int m = c.dim + 1;
  std::vector<std::vector<double>> q(static_cast<size_t>(m),
                                     std::vector<double>(static_cast<size_t>(m)));
  for (auto& row : q)
    for (auto& v : row) v = gauss();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < i; ++j) {
      double d = 0.0;
      for (int k = 0; k < m; ++k) d += q[i][k] * q[j][k];
      for (int k = 0; k < m; ++k) q[i][k] -= d * q[j][k];
    }
    double n = 0.0;
    for (int k = 0; k < m; ++k) n += q[i][k] * q[i][k];
    n = 1.0 / std::sqrt(n);
    for (int k = 0; k < m; ++k) q[i][k] *= n;
  }
  ProjectiveCurve out = c;
  for (auto& p : out.points) {
    std::vector<double> r(static_cast<size_t>(m), 0.0);
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < m; ++k) r[i] += q[i][k] * p[k];
    double n = 0.0;
    for (double v : r) n += v * v;
    n = 1.0 / std::sqrt(n);
    for (double& v : r) v *= n;
    p = std::move(r);
  }
  return out;
}

}  // namespace

TEST_CASE("curve validation") {
  auto c = line_curve(64);
  CHECK_NOTHROW(validate_curve(c));
  auto bad = c;
  bad.points[3][0] *= 1.001;  // not unit
  CHECK_THROWS_AS(validate_curve(bad), std::invalid_argument);
  bad = c;
  bad.points.resize(2);
  bad.points[1] = {0.0, 1.0, 0.0};  // orthogonal pair: sign-ambiguous
  CHECK_THROWS_AS(validate_curve(bad), std::invalid_argument);
}

TEST_CASE("a line meets a generic hyperplane exactly once") {
  auto line = line_curve(360);
  Hyperplane h{{0.3, -0.5, 0.81}};
  double n = std::sqrt(0.3 * 0.3 + 0.25 + 0.81 * 0.81);
  for (auto& v : h.normal) v /= n;
  CHECK(count_intersections(line, h) == 1);

  std::mt19937_64 rng(42);
  for (int k = 0; k < 500; ++k) {
    double a = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    double b = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    double c = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    double nn = std::sqrt(a * a + b * b + c * c);
    if (nn < 1e-3) continue;
    CHECK(count_intersections(line, Hyperplane{{a / nn, b / nn, c / nn}}) == 1);
  }
}

TEST_CASE("a curve inside one open hemisphere band misses far hyperplanes") {
  // Small circle near the pole of S^2 against the equatorial line z = 0.
  ProjectiveCurve c;
  c.dim = 2;
  c.closed = true;
  for (int k = 0; k < 128; ++k) {
    double th = 2.0 * M_PI * k / 128;
    c.points.push_back({0.2 * std::cos(th), 0.2 * std::sin(th), std::sqrt(1.0 - 0.04)});
  }
  validate_curve(c);
  CHECK(count_intersections(c, Hyperplane{{0.0, 0.0, 1.0}}) == 0);
}

TEST_CASE("degenerate incidence is rejected") {
  auto line = line_curve(360);
  // Hyperplane through the first vertex (1, 0, 0).
  CHECK_THROWS_AS(count_intersections(line, Hyperplane{{0.0, 1.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("conic degree bound: every count is at most two") {
  auto conic = conic_curve(720);
  std::mt19937_64 rng(7);
  auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5; };
  for (int k = 0; k < 10000; ++k) {
    double a = u(), b = u(), c = u();
    double nn = std::sqrt(a * a + b * b + c * c);
    if (nn < 1e-3) continue;
    int cnt;
    try {
      cnt = count_intersections(conic, Hyperplane{{a / nn, b / nn, c / nn}});
    } catch (const std::invalid_argument&) {
      continue;
    }
    CHECK(cnt <= 2);
    CHECK(cnt % 2 == 0);  // the conic is null-homotopic in RP^2
  }
}

TEST_CASE("normalized length fixtures") {
  CHECK(normalized_length(line_curve(360)) == doctest::Approx(1.0).epsilon(1e-4));

  // Half of a great circle, as an open polyline.
  ProjectiveCurve half;
  half.dim = 2;
  half.closed = false;
  for (int k = 0; k <= 180; ++k) {
    double th = 0.5 * M_PI * k / 180;
    half.points.push_back({std::cos(th), std::sin(th), 0.0});
  }
  CHECK(normalized_length(half) == doctest::Approx(0.5).epsilon(1e-4));

  // Conic length against a fine-grid arc-length quadrature: the locus is the
  // latitude circle at height 1/sqrt(2), of spherical length 2 pi / sqrt(2).
  auto conic = conic_curve(4096);
  double quad = 0.0;
  const int fine = 1 << 20;
  const double s = 1.0 / std::sqrt(2.0);
  auto pt = [&](int k) {
    double th = 2.0 * M_PI * k / fine;
    return std::array<double, 3>{s * std::cos(th), s * std::sin(th), s};
  };
  for (int k = 0; k < fine; ++k) {
    auto a = pt(k), b = pt(k + 1);
    double d = 0.0;
    for (int i = 0; i < 3; ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
    quad += std::sqrt(d);
  }
  quad /= M_PI;
  CHECK(normalized_length(conic) == doctest::Approx(quad).epsilon(1e-6));
  CHECK(quad == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("crofton estimates") {
  auto line = line_curve(360);
  auto est = crofton_length(line, 1000, 7);
  CHECK(est.mean == 1.0);
  CHECK(est.std_error == 0.0);
  CHECK(est.exact_length == doctest::Approx(1.0));

  SUBCASE("determinism: identical seeds give identical estimates") {
    auto conic = conic_curve(720);
    std::vector<int> c1, c2;
    auto e1 = crofton_length(conic, 2000, 99, &c1);
    auto e2 = crofton_length(conic, 2000, 99, &c2);
    CHECK(e1.mean == e2.mean);
    CHECK(e1.std_error == e2.std_error);
    CHECK(c1 == c2);
    auto e3 = crofton_length(conic, 2000, 100);
    CHECK(e1.mean != e3.mean);
  }

  SUBCASE("self-consistency: conic mean within three standard errors") {
    auto conic = conic_curve(720);
    auto e = crofton_length(conic, 30000, 5);
    CHECK(std::abs(e.mean - e.exact_length) <= 3.0 * e.std_error);
    CHECK(e.mean <= 2.0 + 1e-12);  // degree bound in the mean
  }

  SUBCASE("cubic: every count at most three, mean under the degree") {
    auto cubic = cubic_curve(2000);
    std::vector<int> counts;
    auto e = crofton_length(cubic, 20000, 11, &counts);
    for (int c : counts) CHECK(c <= 3);
    CHECK(e.mean <= 3.0);
    CHECK(std::abs(e.mean - e.exact_length) <= 3.0 * e.std_error);
  }

  SUBCASE("sample count below 100 is rejected") {
    CHECK_THROWS_AS(crofton_length(line, 50, 1), std::invalid_argument);
  }
}

TEST_CASE("rotation invariance of the estimate") {
  auto conic = conic_curve(720);
  auto base = crofton_length(conic, 40000, 21);
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    auto rot = rotate_curve(conic, seed);
    auto est = crofton_length(rot, 40000, 21);
    double combined = std::sqrt(base.std_error * base.std_error + est.std_error * est.std_error);
    CHECK(std::abs(est.mean - base.mean) < 3.0 * combined + 1e-12);
    CHECK(est.exact_length == doctest::Approx(base.exact_length).epsilon(1e-9));
  }
}

TEST_CASE("standard error shrinks like one over sqrt(samples)") {
  auto conic = conic_curve(720);
  auto e3 = crofton_length(conic, 1000, 13);
  auto e4 = crofton_length(conic, 10000, 13);
  auto e5 = crofton_length(conic, 100000, 13);
  double r34 = e3.std_error / e4.std_error;
  double r45 = e4.std_error / e5.std_error;
  const double root10 = std::sqrt(10.0);
  CHECK(r34 > root10 / 2.0);
  CHECK(r34 < root10 * 2.0);
  CHECK(r45 > root10 / 2.0);
  CHECK(r45 < root10 * 2.0);
}

TEST_CASE("projective reverse isoperimetric check") {
  auto chk = verify_projective_rii(line_curve(360), 1);
  CHECK(chk.lhs == doctest::Approx(1.0));
  CHECK(chk.rhs == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(chk.pass);

  // Conic family degenerating to a double line: constant lhs = 2, rhs -> 0.
  // C_t is the real boundary x^2 + y^2 = t as t -> 0, a shrinking circle.
  double prev_rhs = 10.0;
  for (double t : {0.5, 0.1, 0.001}) {
    ProjectiveCurve c;
    c.dim = 2;
    c.closed = true;
    double s = std::sqrt(t / (1.0 + t));
    double z = std::sqrt(1.0 / (1.0 + t));
    for (int k = 0; k < 720; ++k) {
      double th = 2.0 * M_PI * k / 720;
      c.points.push_back({s * std::cos(th), s * std::sin(th), z});
    }
    auto chk2 = verify_projective_rii(c, 2);
    CHECK(chk2.pass);
    CHECK(chk2.lhs == doctest::Approx(2.0));
    CHECK(chk2.rhs < prev_rhs);
    prev_rhs = chk2.rhs;
  }
  CHECK(prev_rhs < 0.1);

  auto cubic = cubic_curve(2000);
  CHECK(verify_projective_rii(cubic, 3).pass);
  CHECK_THROWS_AS(verify_projective_rii(cubic, 0), std::invalid_argument);
}
