#include <doctest.h>

#include "geofd/geometry.hpp"

using namespace geofd;

TEST_CASE("distance is euclidean") {
  CHECK(distance_m({0, 0}, {3, 4}) == doctest::Approx(5.0));
  CHECK(distance_m({1, 1}, {1, 1}) == 0.0);
}

TEST_CASE("rect membership is closed") {
  const Rect r{0, 10, 0, 5};
  CHECK(r.contains({0, 0}));
  CHECK(r.contains({10, 5}));
  CHECK_FALSE(r.contains({10.001, 5}));
  CHECK_FALSE(r.contains_strictly({0, 2}));
  CHECK(r.contains_strictly({5, 2}));
  CHECK(r.area() == 50.0);
  CHECK_FALSE(Rect{0, 0, 0, 5}.has_positive_area());
}

TEST_CASE("interiors overlap only with positive-area intersection") {
  const Rect a{0, 10, 0, 10};
  CHECK(interiors_overlap(a, {5, 15, 5, 15}));
  CHECK_FALSE(interiors_overlap(a, {10, 20, 0, 10}));  // shared edge
  CHECK_FALSE(interiors_overlap(a, {10, 20, 10, 20}));  // shared corner
  CHECK_FALSE(interiors_overlap(a, {11, 20, 0, 10}));
}

TEST_CASE("segment against rectangle") {
  const Rect r{10, 20, 10, 20};
  CHECK(segment_intersects({0, 15}, {30, 15}, r));
  CHECK(segment_intersects({15, 0}, {15, 30}, r));
  CHECK(segment_intersects({0, 0}, {30, 30}, r));
  CHECK_FALSE(segment_intersects({0, 0}, {5, 30}, r));
  CHECK_FALSE(segment_intersects({0, 25}, {30, 25}, r));
  // Touching the corner counts.
  CHECK(segment_intersects({0, 20}, {10, 20}, r));
  CHECK(segment_intersects({0, 30}, {30, 0}, r));
  // Degenerate segment.
  CHECK(segment_intersects({15, 15}, {15, 15}, r));
  CHECK_FALSE(segment_intersects({5, 5}, {5, 5}, r));
  // Segment ending short of the rectangle.
  CHECK_FALSE(segment_intersects({0, 15}, {9.99, 15}, r));
}
