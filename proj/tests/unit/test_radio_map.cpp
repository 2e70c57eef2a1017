#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "geofd/error.hpp"
#include "geofd/radio_map.hpp"

using namespace geofd;

namespace {

RadioMap small_map() {
  return RadioMap({0, 0}, 50, 2, 2, {25, 25}, {100, 110, 120, 130});
}

}  // namespace

TEST_CASE("hand-written 2x2 file") {
  const std::string text =
      "0 0\n"
      "50\n"
      "2 2\n"
      "25 25\n"
      "100 110\n"
      "120 130\n";
  const RadioMap m = parse_radio_map(text);
  CHECK(m.n_cols() == 2);
  CHECK(m.n_rows() == 2);
  CHECK(m.at(0, 0) == 100);
  CHECK(m.at(1, 0) == 110);
  CHECK(m.at(0, 1) == 120);
  CHECK(m.at(1, 1) == 130);
  CHECK(m == small_map());
  CHECK(format_radio_map(m) == text);
}

TEST_CASE("parse errors name the location") {
  SUBCASE("short row") {
    const std::string text = "0 0\n50\n3 2\n0 0\n1 2 3\n4 5\n";
    try {
      parse_radio_map(text);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("row 1") != std::string::npos);
    }
  }
  SUBCASE("non-numeric cell") {
    const std::string text = "0 0\n50\n2 1\n0 0\n1 x\n";
    try {
      parse_radio_map(text);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("row 0") != std::string::npos);
      CHECK(msg.find("column 1") != std::string::npos);
    }
  }
  SUBCASE("negative cell") {
    CHECK_THROWS_AS(parse_radio_map("0 0\n50\n2 1\n0 0\n1 -2\n"), ParseError);
  }
  SUBCASE("malformed header") {
    CHECK_THROWS_AS(parse_radio_map("0 0\n50\n"), ParseError);
    CHECK_THROWS_AS(parse_radio_map("0\n50\n1 1\n0 0\n1\n"), ParseError);
    CHECK_THROWS_AS(parse_radio_map("0 0\n50\n0 1\n0 0\n\n"), ParseError);
  }
  SUBCASE("row count mismatch") {
    CHECK_THROWS_AS(parse_radio_map("0 0\n50\n1 2\n0 0\n1\n"), ParseError);
  }
}

TEST_CASE("constructor enforces invariants") {
  CHECK_THROWS_AS(RadioMap({0, 0}, 50, 2, 2, {0, 0}, {1, 2, 3}), ValidationError);
  CHECK_THROWS_AS(RadioMap({0, 0}, 50, 1, 1, {0, 0}, {-1}), ValidationError);
  CHECK_THROWS_AS(RadioMap({0, 0}, 50, 1, 1, {0, 0}, {NAN}), ValidationError);
  CHECK_THROWS_AS(RadioMap({0, 0}, 0, 1, 1, {0, 0}, {1}), ValidationError);
}

TEST_CASE("nearest-pixel lookup") {
  const RadioMap m = small_map();
  CHECK(pathloss_at(m, m.pixel_center(1, 0)) == 110);
  CHECK(pathloss_at(m, {0, 0}) == 100);
  // Shared edge x = 50 belongs to the larger column.
  CHECK(pathloss_at(m, {50, 10}) == 110);
  CHECK(pathloss_at(m, {49.999, 10}) == 100);
  CHECK(pathloss_at(m, {50.001, 10}) == 110);
  CHECK(pathloss_at(m, {10, 50}) == 120);
  // Outer north/east boundary belongs to the last row/column.
  CHECK(pathloss_at(m, {100, 100}) == 130);
  CHECK(m.locate({100, 100}) == GridIndex{1, 1});
  CHECK_THROWS_AS(pathloss_at(m, {100.001, 10}), BoundsError);
  CHECK_THROWS_AS(pathloss_at(m, {-0.001, 10}), BoundsError);
  try {
    pathloss_at(m, {-5, 7});
  } catch (const BoundsError& e) {
    CHECK(std::string(e.what()).find("-5") != std::string::npos);
  }
}

TEST_CASE("synthetic baseline matches free space for exponent 2") {
  // 32.45 + 20 log10(d_km) + 20 log10(f_MHz), written out independently.
  for (double d : {1.0, 10.0, 137.5, 900.0}) {
    const double fs = 32.45 + 20 * std::log10(d / 1000.0) + 20 * std::log10(2140.0);
    CHECK(synthetic_baseline_db(d, 2140, 2.0) == doctest::Approx(fs).epsilon(1e-12));
  }
  CHECK(synthetic_baseline_db(0.2, 2140, 2.0) == synthetic_baseline_db(1.0, 2140, 2.0));
}

TEST_CASE("full-scale synthetic map") {
  SyntheticMapSpec spec;
  const RadioMap m = generate_synthetic_map(spec, 7);
  CHECK(m.n_cols() == 21);
  CHECK(m.n_rows() == 22);
  CHECK(m.bounds() == Rect{0, 1050, 0, 1100});
  CHECK(m == generate_synthetic_map(spec, 8));
  CHECK(format_radio_map(m) == format_radio_map(generate_synthetic_map(spec, 7)));

  SUBCASE("monotone along rays without obstructions") {
    const Position bs = spec.bs_position;
    for (int c = 0; c < m.n_cols(); ++c) {
      for (int r = 0; r < m.n_rows(); ++r) {
        for (int c2 = 0; c2 < m.n_cols(); ++c2) {
          const int r2 = r;
          const double d1 = distance_m(bs, m.pixel_center(c, r));
          const double d2 = distance_m(bs, m.pixel_center(c2, r2));
          if (d1 < d2) CHECK(m.at(c, r) <= m.at(c2, r2));
        }
      }
    }
  }
}

TEST_CASE("planted obstruction adds its penetration exactly") {
  SyntheticMapSpec spec;
  spec.obstructions.push_back({{100, 200, 100, 300}, 40.0});
  const RadioMap with = generate_synthetic_map(spec, 1);
  spec.obstructions.clear();
  const RadioMap without = generate_synthetic_map(spec, 1);
  for (int c = 0; c < with.n_cols(); ++c) {
    for (int r = 0; r < with.n_rows(); ++r) {
      const bool covered = Rect{100, 200, 100, 300}.contains(with.pixel_center(c, r));
      const double diff = with.at(c, r) - without.at(c, r);
      CHECK(diff == doctest::Approx(covered ? 40.0 : 0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("degenerate synthetic specs are rejected") {
  SyntheticMapSpec spec;
  spec.width_m = 0;
  CHECK_THROWS_AS(generate_synthetic_map(spec, 1), ValidationError);
  spec = {};
  spec.width_m = 1060;
  CHECK_THROWS_AS(validate(spec), ValidationError);
  spec = {};
  spec.obstructions.push_back({{1000, 1100, 0, 100}, 40});
  CHECK_THROWS_AS(validate(spec), ValidationError);
}

TEST_CASE("file round trip and fingerprint") {
  SyntheticMapSpec spec;
  spec.exponent = 2.2;
  spec.obstructions.push_back({{600, 750, 200, 850}, 60});
  const RadioMap m = generate_synthetic_map(spec, 1);
  const RadioMap back = parse_radio_map(format_radio_map(m));
  CHECK(back == m);
  CHECK(map_fingerprint(back) == map_fingerprint(m));
  CHECK(map_fingerprint(m).rfind("fnv1a64:", 0) == 0);
  CHECK(map_fingerprint(m) != map_fingerprint(small_map()));
}
