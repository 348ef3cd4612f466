#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rii/fieldgen.hpp"
#include "rii/json_io.hpp"
#include "rii/thicken.hpp"

#include <cmath>

using namespace rii;

TEST_CASE("field documents round-trip exactly in rational pairs") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto f = random_field(seed);
    Json doc = field_to_json(f);
    auto g = field_from_json<Rat>(doc);
    CHECK(g.xi() == f.xi());
    REQUIRE(g.component_count() == f.component_count());
    for (int ci = 0; ci < f.component_count(); ++ci) {
      const auto& a = f.component(ci);
      const auto& b = g.component(ci);
      CHECK(a.kind == b.kind);
      CHECK(a.length == b.length);
      REQUIRE(a.pts.size() == b.pts.size());
      for (size_t i = 0; i < a.pts.size(); ++i) {
        CHECK(a.pts[i].pos == b.pts[i].pos);
        CHECK(a.pts[i].value == b.pts[i].value);
      }
    }
  }
}

TEST_CASE("field document schema") {
  auto f = random_field(3);
  Json doc = field_to_json(f);
  REQUIRE(doc.contains("components"));
  REQUIRE(doc.contains("xi"));
  CHECK(doc["xi"].is_array());
  for (const auto& comp : doc["components"]) {
    CHECK((comp["kind"] == "circle" || comp["kind"] == "interval"));
    CHECK(comp["length"].is_array());
    for (const auto& bp : comp["breakpoints"]) {
      REQUIRE(bp.is_array());
      CHECK(bp.size() == 4);  // pos_num, pos_den, val_num, val_den
      for (const auto& v : bp) CHECK(v.is_number_integer());
    }
  }

  SUBCASE("malformed documents are rejected") {
    Json bad = doc;
    bad.erase("xi");
    CHECK_THROWS_AS(field_from_json<Rat>(bad), std::exception);
    bad = doc;
    bad["components"][0]["kind"] = "moebius";
    CHECK_THROWS_AS(field_from_json<Rat>(bad), std::invalid_argument);
    bad = doc;
    bad["components"][0]["breakpoints"][0] = Json::array({1, 2, 3});
    CHECK_THROWS_AS(field_from_json<Rat>(bad), std::invalid_argument);
    bad = doc;
    bad["components"][0]["breakpoints"][0][1] = 0;  // zero denominator
    CHECK_THROWS_AS(field_from_json<Rat>(bad), std::invalid_argument);
  }
}

TEST_CASE("double fields serialize as exact dyadic pairs") {
  Component<double> c;
  c.kind = ComponentKind::Circle;
  c.length = 2.0 * M_PI;
  c.pts = {{0.0, std::log(10.0 * std::sqrt(6.0))}, {1.0, 0.9}};
  PiecewiseScalarField<double> f({c}, 0.5);
  Json doc = field_to_json(f);
  auto g = field_from_json<double>(doc);
  CHECK(g.xi() == f.xi());
  CHECK(g.component(0).length == f.component(0).length);
  CHECK(g.component(0).pts[0].value == f.component(0).pts[0].value);  // bit-exact
}

TEST_CASE("partition documents carry classes, forest, slabs, necks and bounds") {
  auto f = field_to_double(random_field(11));
  PartitionParams<double> params;
  params.t_min = f.xi();
  auto part = thick_thin_partition(f, params);
  auto bounds = verify_cardinality_bounds(part, 1.0, 0.5);
  Json doc = partition_to_json(part, &bounds);

  CHECK(doc["mode"] == "float");
  CHECK(doc["classes"].size() == static_cast<size_t>(part.class_count()));
  CHECK(doc["forest"]["parents"].size() == static_cast<size_t>(part.class_count()));
  for (const auto& jc : doc["classes"]) {
    CHECK(jc.contains("t_lo"));
    CHECK(jc.contains("arc_bottom"));
    CHECK(jc.contains("slabs"));
    int id = jc["id"].get<int>();
    CHECK(doc["forest"]["parents"][static_cast<size_t>(id)].get<int>() ==
          part.classes[static_cast<size_t>(id)].parent);
  }
  CHECK(doc["thin_necks"].size() == part.necks.size());
  for (const auto& jn : doc["thin_necks"]) CHECK(jn.contains("exceptional"));
  CHECK(doc["bounds"]["entries"].size() == 5);
  CHECK(doc["thick_components"].get<int>() == part.thick_component_count);
}

TEST_CASE("curve documents") {
  auto c = conic_curve(64);
  Json doc = curve_to_json(c);
  CHECK(doc["n"] == 2);
  CHECK(doc["closed"] == true);
  auto back = curve_from_json(doc);
  CHECK(back.points == c.points);

  SUBCASE("nonunit and non-finite points are rejected") {
    Json bad = doc;
    bad["points"][0][0] = 0.9;
    CHECK_THROWS_AS(curve_from_json(bad), std::invalid_argument);
    bad = doc;
    bad["points"][1][2] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(curve_from_json(bad), std::invalid_argument);
  }
}

TEST_CASE("estimate and density documents") {
  CroftonEstimate est{1.25, 0.003, 1000, 1.247, 2};
  Json j = estimate_to_json(est);
  CHECK(j["mean"] == 1.25);
  CHECK(j["std_error"] == 0.003);
  CHECK(j["samples"] == 1000);
  CHECK(j["exact_length"] == 1.247);
  CHECK(j["resamples"] == 2);

  auto m = make_annulus_map(1.0);
  auto den = annulus_cylinder_density(m, 16, 8);
  Json jd = density_to_json(den);
  CHECK(jd["rows"] == 16);
  CHECK(jd["dr"].is_number());
  auto back = density_from_json(jd);
  CHECK(back.values == den.values);
  CHECK(back.total_mass() == doctest::Approx(den.total_mass()));

  Json bad = jd;
  bad["values"][0] = -1.0;
  CHECK_THROWS_AS(density_from_json(bad), std::invalid_argument);
  bad = jd;
  bad["rows"] = 7;
  CHECK_THROWS_AS(density_from_json(bad), std::invalid_argument);
}

TEST_CASE("oversized rationals fall back to strings and parse back") {
  Rat huge = make_rat(1, 3);
  for (int i = 0; i < 5; ++i) huge = huge * huge + make_rat(1, 7);  // blow up the denominator
  Json j = scalar_to_json<Rat>(huge);
  CHECK(j.is_string());
  CHECK(scalar_from_json<Rat>(j) == huge);
}
