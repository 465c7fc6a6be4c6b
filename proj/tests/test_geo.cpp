#include <doctest.h>

#include "geotravel/corpus.hpp"
#include "geotravel/geo.hpp"
#include "support/synthetic.hpp"

using namespace geotravel;
using testsupport::random_lattice_box;

TEST_SUITE_BEGIN("geo");

TEST_CASE("point_in_box basics") {
  GeoBox b(GeoPoint(-1, -1), GeoPoint(1, 1));
  CHECK(point_in_box(GeoPoint(0, 0), b));
  CHECK(point_in_box(GeoPoint(1, 1), b));  // boundary inclusive
  CHECK(point_in_box(GeoPoint(-1, 1), b));
  CHECK_FALSE(point_in_box(GeoPoint(2, 0), b));
  CHECK_FALSE(point_in_box(GeoPoint(0, -1.0001), b));
}

TEST_CASE("boxes_overlap basics") {
  CHECK(boxes_overlap(GeoBox(GeoPoint(0, 0), GeoPoint(2, 2)),
                      GeoBox(GeoPoint(1, 1), GeoPoint(3, 3))));
  CHECK(boxes_overlap(GeoBox(GeoPoint(0, 0), GeoPoint(1, 1)),
                      GeoBox(GeoPoint(1, 1), GeoPoint(2, 2))));  // corner contact
  CHECK_FALSE(boxes_overlap(GeoBox(GeoPoint(0, 0), GeoPoint(1, 1)),
                            GeoBox(GeoPoint(2, 2), GeoPoint(3, 3))));
  // Edge contact counts too.
  CHECK(boxes_overlap(GeoBox(GeoPoint(0, 0), GeoPoint(1, 1)),
                      GeoBox(GeoPoint(0, 1), GeoPoint(1, 2))));
}

TEST_CASE("box_centroid basics") {
  GeoPoint c = box_centroid(GeoBox(GeoPoint(0, 0), GeoPoint(2, 4)));
  CHECK(c.lat == doctest::Approx(1.0));
  CHECK(c.lon == doctest::Approx(2.0));

  c = box_centroid(GeoBox(GeoPoint(-1, -1), GeoPoint(1, 1)));
  CHECK(c.lat == doctest::Approx(0.0));
  CHECK(c.lon == doctest::Approx(0.0));

  c = box_centroid(GeoBox(GeoPoint(5, 5), GeoPoint(5, 5)));
  CHECK(c.lat == doctest::Approx(5.0));
  CHECK(c.lon == doctest::Approx(5.0));
}

TEST_CASE("construction rejects bad inputs") {
  CHECK_THROWS_AS(GeoPoint(90.5, 0), std::invalid_argument);
  CHECK_THROWS_AS(GeoPoint(-91, 0), std::invalid_argument);
  CHECK_THROWS_AS(GeoPoint(0, 180.5), std::invalid_argument);
  CHECK_THROWS_AS(GeoPoint(0, -181), std::invalid_argument);
  // Corners out of order (this also rules out antimeridian-crossing boxes).
  CHECK_THROWS_AS(GeoBox(GeoPoint(1, 0), GeoPoint(0, 1)), std::invalid_argument);
  CHECK_THROWS_AS(GeoBox(GeoPoint(0, 1), GeoPoint(1, 0)), std::invalid_argument);
}

TEST_CASE("overlap is symmetric and centroid stays inside") {
  Rng rng(2024);
  for (int i = 0; i < 2000; ++i) {
    GeoBox a = random_lattice_box(rng);
    GeoBox b = random_lattice_box(rng);
    CHECK(boxes_overlap(a, b) == boxes_overlap(b, a));
    CHECK(point_in_box(box_centroid(a), a));
  }
}

TEST_CASE("resolve_location decision table") {
  GeoBox city(GeoPoint(-1, -1), GeoPoint(1, 1));

  Tweet t;
  t.id = 1;
  t.text = "x";
  t.lang = "pt";

  SUBCASE("coordinates inside win") {
    t.coordinates = GeoPoint(0.5, 0.5);
    GeoResolution r = resolve_location(t, city);
    CHECK(r.kind == GeoResolutionKind::InsideByCoordinates);
    REQUIRE(r.effective_point.has_value());
    CHECK(r.effective_point->lat == doctest::Approx(0.5));
  }
  SUBCASE("place overlap used when coordinates absent") {
    t.place_box = GeoBox(GeoPoint(0.5, 0.5), GeoPoint(2, 2));
    GeoResolution r = resolve_location(t, city);
    CHECK(r.kind == GeoResolutionKind::InsideByPlaceOverlap);
    REQUIRE(r.effective_point.has_value());
    // Effective point is the place-box centroid, even outside the city.
    CHECK(r.effective_point->lat == doctest::Approx(1.25));
    CHECK(r.effective_point->lon == doctest::Approx(1.25));
  }
  SUBCASE("coordinates outside beat an overlapping place") {
    t.coordinates = GeoPoint(2, 0);
    t.place_box = GeoBox(GeoPoint(0, 0), GeoPoint(0.5, 0.5));
    GeoResolution r = resolve_location(t, city);
    CHECK(r.kind == GeoResolutionKind::Outside);
    CHECK_FALSE(r.effective_point.has_value());
  }
  SUBCASE("neither field is unresolvable") {
    GeoResolution r = resolve_location(t, city);
    CHECK(r.kind == GeoResolutionKind::Unresolvable);
    CHECK_FALSE(r.effective_point.has_value());
  }
}

TEST_SUITE_END();
