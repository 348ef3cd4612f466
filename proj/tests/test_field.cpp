#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grid_oracle.hpp"
#include "rii/field.hpp"
#include "rii/fieldgen.hpp"
#include "rii/partition.hpp"

#include <cmath>

using namespace rii;

namespace {

PiecewiseScalarField<Rat> tent_field() {
  Component<Rat> c;
  c.kind = ComponentKind::Interval;
  c.length = Rat(1);
  c.pts = {{Rat(0), Rat(0)}, {make_rat(1, 2), Rat(1)}, {Rat(1), Rat(0)}};
  return PiecewiseScalarField<Rat>({c}, Rat(0));
}

// Circle with two peaks at 1 and two interior minima at 2/5.
PiecewiseScalarField<Rat> w_circle() {
  Component<Rat> c;
  c.kind = ComponentKind::Circle;
  c.length = Rat(1);
  c.pts = {{Rat(0), Rat(1)},
           {make_rat(1, 4), make_rat(2, 5)},
           {make_rat(1, 2), Rat(1)},
           {make_rat(3, 4), make_rat(2, 5)}};
  return PiecewiseScalarField<Rat>({c}, Rat(0));
}

}  // namespace

TEST_CASE("field validation rejects malformed inputs") {
  Component<Rat> c;
  c.kind = ComponentKind::Interval;
  c.length = Rat(1);
  c.pts = {{Rat(0), Rat(0)}, {Rat(1), Rat(0)}};
  CHECK_NOTHROW(PiecewiseScalarField<Rat>({c}, Rat(0)));
  CHECK_THROWS_AS(PiecewiseScalarField<Rat>({}, Rat(0)), std::invalid_argument);

  auto bad = c;
  bad.pts[1].pos = Rat(0);  // not strictly increasing
  CHECK_THROWS_AS(PiecewiseScalarField<Rat>({bad}, Rat(0)), std::invalid_argument);

  bad = c;
  bad.pts[0].value = Rat(-1);  // below base level
  CHECK_THROWS_AS(PiecewiseScalarField<Rat>({bad}, Rat(0)), std::invalid_argument);

  bad = c;
  bad.pts[1].pos = make_rat(1, 2);  // interval must end at length
  CHECK_THROWS_AS(PiecewiseScalarField<Rat>({bad}, Rat(0)), std::invalid_argument);

  Component<Rat> circ;
  circ.kind = ComponentKind::Circle;
  circ.length = Rat(1);
  circ.pts = {{Rat(1), Rat(1)}};  // position not in [0, length)
  CHECK_THROWS_AS(PiecewiseScalarField<Rat>({circ}, Rat(0)), std::invalid_argument);
}

TEST_CASE("piecewise evaluation interpolates exactly") {
  auto f = tent_field();
  CHECK(f.value(0, make_rat(1, 4)) == make_rat(1, 2));
  CHECK(f.value(0, make_rat(7, 8)) == make_rat(1, 4));

  Component<Rat> c;
  c.kind = ComponentKind::Circle;
  c.length = Rat(2);
  c.pts = {{make_rat(1, 2), Rat(1)}, {make_rat(3, 2), Rat(3)}};
  PiecewiseScalarField<Rat> g({c}, Rat(0));
  CHECK(g.value(0, Rat(1)) == Rat(2));
  CHECK(g.value(0, Rat(0)) == Rat(2));  // wrap segment from 3/2 back to 1/2
  CHECK(g.value(0, make_rat(7, 4)) == make_rat(5, 2));
}

TEST_CASE("e_segment on a constant circle is the full circle") {
  Component<Rat> c;
  c.kind = ComponentKind::Circle;
  c.length = Rat(1);
  c.pts = {{Rat(0), Rat(3)}};
  PiecewiseScalarField<Rat> f({c}, Rat(0));
  auto e = f.e_segment(0, make_rat(3, 10), Rat(3));
  CHECK(arc_is_full(f.component(0), e.arc));
}

TEST_CASE("e_segment of the tent at half height is [1/4, 3/4]") {
  auto f = tent_field();
  auto e = f.e_segment(0, make_rat(1, 2), make_rat(1, 2));
  CHECK(e.arc.start == make_rat(1, 4));
  CHECK(e.arc.len == make_rat(1, 2));
  CHECK_THROWS_AS(f.e_segment(0, make_rat(1, 16), make_rat(1, 2)), std::invalid_argument);
  CHECK_THROWS_AS(f.e_segment(0, make_rat(1, 2), make_rat(-1, 2)), std::invalid_argument);
}

TEST_CASE("e_segment on the two-peak circle matches the grid scan") {
  auto f = w_circle();
  auto e = f.e_segment(0, Rat(0), make_rat(7, 10));
  CHECK(!arc_is_full(f.component(0), e.arc));

  auto fd = field_to_double(f);
  auto [glo, glen] = oracle::grid_segment(fd, 0, 0.0, 0.7, 10000);
  double lo = to_double(e.arc.start), len = to_double(e.arc.len);
  // Wrapping arc around position 0; compare endpoints within a cell.
  CHECK(std::abs(lo - glo) < 2.1e-4);
  CHECK(std::abs(len - glen) < 4.2e-4);

  // The other peak at the same level is a disjoint, incomparable segment.
  auto e2 = f.e_segment(0, make_rat(1, 2), make_rat(7, 10));
  CHECK(compare_segments(f, e, e2) == SegmentOrder::Incomparable);
  CHECK(arc_distance(f.component(0), e.arc, e2.arc) > Rat(0));
}

TEST_CASE("compare_segments implements the two-sided order") {
  auto f = tent_field();
  auto low = f.e_segment(0, make_rat(1, 2), make_rat(1, 4));
  auto high = f.e_segment(0, make_rat(1, 2), make_rat(3, 4));
  CHECK(compare_segments(f, low, high) == SegmentOrder::LessEq);
  CHECK(compare_segments(f, high, low) == SegmentOrder::GreaterEq);
  CHECK(compare_segments(f, high, high) == SegmentOrder::Equal);

  auto g = tent_field();
  CHECK_THROWS_AS(compare_segments(f, low, g.e_segment(0, make_rat(1, 2), make_rat(1, 4))),
                  std::invalid_argument);
}

TEST_CASE("segment order axioms and monotone nesting on random fields") {
  // Reflexive/transitive/antisymmetric over sampled E-segments, plus
  // e(x, t') inside e(x, t) for t' >= t.
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto f = random_field(seed);
    std::mt19937_64 rng(seed * 77 + 5);
    std::vector<ESegment<Rat>> segs;
    for (int k = 0; k < 12; ++k) {
      int ci = static_cast<int>(rng() % static_cast<unsigned>(f.component_count()));
      const auto& comp = f.component(ci);
      Rat x = comp.pts[rng() % comp.pts.size()].pos;
      Rat lo = f.xi(), hi = f.value(ci, x);
      Rat t = lo + (hi - lo) * make_rat(static_cast<long long>(rng() % 97), 97);
      segs.push_back(f.e_segment(ci, x, t));

      Rat t2 = t + (hi - t) * make_rat(static_cast<long long>(rng() % 97), 97);
      auto inner = f.e_segment(ci, x, t2);
      CHECK(arc_contains(comp, segs.back().arc, inner.arc));
    }
    for (const auto& a : segs) CHECK(compare_segments(f, a, a) == SegmentOrder::Equal);
    for (const auto& a : segs)
      for (const auto& b : segs) {
        auto ab = compare_segments(f, a, b);
        auto ba = compare_segments(f, b, a);
        if (ab == SegmentOrder::LessEq) CHECK(ba == SegmentOrder::GreaterEq);
        if (ab == SegmentOrder::Equal) CHECK(ba == SegmentOrder::Equal);
        for (const auto& c : segs) {
          if (ab == SegmentOrder::LessEq && compare_segments(f, b, c) == SegmentOrder::LessEq) {
            auto ac = compare_segments(f, a, c);
            bool le = ac == SegmentOrder::LessEq || ac == SegmentOrder::Equal;
            CHECK(le);
            ++checked;
          }
        }
      }
  }
  CHECK(checked > 100);
}

TEST_CASE("radius profiles reject Lipschitz violations") {
  auto f = tent_field();
  CHECK_NOTHROW(RadiusProfile<Rat>::constant(f, Rat(1)));

  Component<Rat> r;
  r.kind = ComponentKind::Interval;
  r.length = Rat(1);
  r.pts = {{Rat(0), Rat(1)}, {make_rat(1, 2), Rat(2)}, {Rat(1), Rat(1)}};  // slope 2
  CHECK_THROWS_AS(RadiusProfile<Rat>({r}), std::invalid_argument);

  r.pts = {{Rat(0), Rat(1)}, {make_rat(1, 2), make_rat(5, 4)}, {Rat(1), Rat(1)}};
  CHECK_NOTHROW(RadiusProfile<Rat>({r}));

  r.pts[1].value = Rat(0);  // not positive
  CHECK_THROWS_AS(RadiusProfile<Rat>({r}), std::invalid_argument);
}

TEST_CASE("dense disk assignment accepts long disjoint segments") {
  Component<double> c;
  c.kind = ComponentKind::Interval;
  c.length = 1.0;
  c.pts = {{0.0, 5.0}, {1.0, 5.0}};
  PiecewiseScalarField<double> f({c}, 0.0);
  auto r = RadiusProfile<double>::constant(f, 1.0);

  const double t = 3.5;
  const double u = std::exp(-t);
  std::vector<ESegment<double>> segs = {
      {0, {0.05, 8.0 * u}, t, f.id()},
      {0, {0.05 + 8.0 * u + 5.0 * u, 8.0 * u}, t, f.id()},
  };
  auto da = dense_disk_assignment(f, r, segs);
  CHECK(da.disks.size() == 2);
  CHECK(da.disjointness_criterion);
  CHECK(da.disks[0].radius == doctest::Approx(u));

  SUBCASE("too-short segments are rejected") {
    segs[0].arc.len = 7.9 * u;
    CHECK_THROWS_AS(dense_disk_assignment(f, r, segs), std::invalid_argument);
  }
  SUBCASE("overlapping segments are rejected") {
    segs[1].arc.start = segs[0].arc.start + 4.0 * u;
    CHECK_THROWS_AS(dense_disk_assignment(f, r, segs), std::invalid_argument);
  }
  SUBCASE("segments must sit under the graph at their level") {
    segs[0].level = 5.5;
    segs[0].arc.len = 8.0 * std::exp(-5.5);
    segs[1].level = 5.5;
    CHECK_THROWS_AS(dense_disk_assignment(f, r, segs), std::invalid_argument);
  }
}

TEST_CASE("I2 discretization reproduces the floor counts") {
  // Constant field tall enough for three dyadic levels.
  Component<double> c;
  c.kind = ComponentKind::Circle;
  c.length = 40.0;
  c.pts = {{0.0, 5.5}};
  PiecewiseScalarField<double> f({c}, std::log(2.0));
  auto part = thick_thin_partition(f, PartitionParams<double>::for_k(1.0));
  auto segs = i2_discretization(part);
  REQUIRE(!segs.empty());
  const double ln3 = std::log(3.0);
  for (const auto& s : segs) {
    // Independent recomputation of n = floor(e^t * len / 8).
    long long expect = static_cast<long long>(std::floor(std::exp(s.t) * s.k_len / 8.0));
    CHECK(s.n_pieces == expect);
    CHECK(s.t >= std::log(2.0) - 1e-12);
    CHECK(std::fmod(s.t - std::log(2.0), 2.0 * ln3) < 2.0 * ln3 + 1e-9);
    for (const auto& p : s.pieces) CHECK(p.arc.len == doctest::Approx(8.0 * std::exp(-s.t)));
  }
  // The pieces at each level feed the disk assignment.
  auto r = RadiusProfile<double>::constant(f, 1.0);
  for (const auto& s : segs) {
    if (s.pieces.empty()) continue;
    auto da = dense_disk_assignment(f, r, s.pieces);
    CHECK(da.disjointness_criterion);
  }
}
