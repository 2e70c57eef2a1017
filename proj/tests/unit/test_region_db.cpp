#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "geofd/error.hpp"
#include "geofd/propagation.hpp"
#include "geofd/region_db.hpp"

using namespace geofd;

namespace {

RadioMap flat_map(double value = 80.0) {
  return RadioMap({0, 0}, 50, 21, 22, {525, 550}, std::vector<double>(21 * 22, value));
}

RadioMap planted(std::vector<PlantedObstruction> obs) {
  SyntheticMapSpec spec;
  spec.obstructions = std::move(obs);
  return generate_synthetic_map(spec, 1);
}

Obstruction obstruction_at(const Rect& r) { return Obstruction{{}, r}; }

AttenuationOracle constant(double v) {
  return [v](Position, Position) { return v; };
}

}  // namespace

TEST_CASE("detection on a uniform low-loss map finds nothing") {
  CHECK(detect_obstructions(flat_map(), 120).empty());
}

TEST_CASE("detection recovers planted rectangles") {
  // Baseline stays below 100 dB on the whole map; +40 dB lifts the planted
  // pixels above it.
  const Rect r1{0, 150, 0, 200};
  const Rect r2{850, 1050, 800, 1100};
  const RadioMap m = planted({{r1, 40}, {r2, 40}});
  const auto obs = detect_obstructions(m, 100);
  REQUIRE(obs.size() == 2);
  CHECK(obs[0].bounds == r1);
  CHECK(obs[1].bounds == r2);
  CHECK(obs[0].pixels.size() == 3 * 4);
  CHECK(obs[1].pixels.size() == 4 * 6);
}

TEST_CASE("diagonal neighbours are separate components") {
  const RadioMap m = planted({{{100, 200, 100, 200}, 40}, {{200, 300, 200, 300}, 40}});
  const auto obs = detect_obstructions(m, 100);
  REQUIRE(obs.size() == 2);
  CHECK(obs[0].bounds == Rect{100, 200, 100, 200});
  CHECK(obs[1].bounds == Rect{200, 300, 200, 300});
}

TEST_CASE("region pairs around a centered obstruction") {
  const RadioMap m = flat_map();
  ExtractionParams p;
  p.band_width_m = 100;
  const Rect o{400, 600, 400, 700};
  const auto pairs = build_region_pairs(obstruction_at(o), p, m);
  REQUIRE(pairs.size() == 4);
  CHECK(pairs[0].a == Rect{400, 500, 700, 800});
  CHECK(pairs[0].b == Rect{400, 500, 300, 400});
  CHECK(pairs[1].a == Rect{500, 600, 700, 800});
  CHECK(pairs[1].b == Rect{500, 600, 300, 400});
  CHECK(pairs[2].a == Rect{600, 700, 400, 550});
  CHECK(pairs[2].b == Rect{300, 400, 400, 550});
  CHECK(pairs[3].a == Rect{600, 700, 550, 700});
  CHECK(pairs[3].b == Rect{300, 400, 550, 700});
  for (const auto& pr : pairs) {
    CHECK_FALSE(interiors_overlap(pr.a, o));
    CHECK_FALSE(interiors_overlap(pr.b, o));
    CHECK_FALSE(pr.alpha_db.has_value());
  }

  p.split_count = 1;
  const auto whole = build_region_pairs(obstruction_at(o), p, m);
  REQUIRE(whole.size() == 2);
  CHECK(whole[0].a == Rect{400, 600, 700, 800});
  CHECK(whole[1].b == Rect{300, 400, 400, 700});
}

TEST_CASE("bands clip to the map and vanish at its edge") {
  const RadioMap m = flat_map();
  ExtractionParams p;
  p.split_count = 1;
  const auto pairs = build_region_pairs(obstruction_at({400, 600, 1000, 1100}), p, m);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].a == Rect{600, 700, 1000, 1100});
  CHECK(pairs[0].b == Rect{300, 400, 1000, 1100});

  p.band_width_m = 200;
  const auto clipped = build_region_pairs(obstruction_at({50, 200, 400, 500}), p, m);
  REQUIRE(clipped.size() == 2);
  CHECK(clipped[1].b == Rect{0, 50, 400, 500});

  CHECK_THROWS_AS(build_region_pairs(obstruction_at({1000, 1100, 0, 100}), p, m),
                  ValidationError);
}

TEST_CASE("two obstructions give eight pairs") {
  const RadioMap m =
      planted({{{150, 300, 200, 900}, 60}, {{700, 850, 200, 900}, 60}});
  ExtractionParams p;
  std::size_t total = 0;
  for (const auto& o : detect_obstructions(m, 120)) total += build_region_pairs(o, p, m).size();
  CHECK(total == 8);
}

TEST_CASE("lattice includes both ends and nests") {
  CHECK(lattice_axis(0, 100, 50) == std::vector<double>{0, 50, 100});
  CHECK(lattice_axis(0, 120, 50) == std::vector<double>{0, 50, 100, 120});
  CHECK(lattice_axis(0, 30, 50) == std::vector<double>{0, 30});
  for (double lo : {0.0, 12.5, 333.0}) {
    for (double len : {75.0, 200.0, 137.0}) {
      const auto coarse = lattice_axis(lo, lo + len, 50);
      const auto fine = lattice_axis(lo, lo + len, 25);
      for (double v : coarse) CHECK(std::find(fine.begin(), fine.end(), v) != fine.end());
    }
  }
}

TEST_CASE("mitigation factor is the minimum sampled attenuation") {
  const RegionPair pr{0, {0, 100, 0, 100}, {300, 400, 0, 100}, std::nullopt};
  CHECK(compute_mitigation_factor(pr, constant(140), 50) == 140);

  // One sampled pair, both corners, is lower.
  auto dip = [](Position a, Position b) {
    if (a == Position{100, 100} && b == Position{300, 0}) return 120.0;
    return 150.0;
  };
  CHECK(compute_mitigation_factor(pr, dip, 50) == 120);

  CHECK_THROWS_AS(compute_mitigation_factor(pr, constant(1), 0), DomainError);
  CHECK_THROWS_AS(compute_mitigation_factor(pr, constant(1), -5), DomainError);
  const RegionPair flat{0, {0, 100, 0, 0}, {300, 400, 0, 100}, std::nullopt};
  CHECK_THROWS_AS(compute_mitigation_factor(flat, constant(1), 50), ValidationError);
}

TEST_CASE("refining the lattice never raises alpha") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 20; ++t) {
    const double ax = 37 * u(rng), ay = 11 * u(rng), bx = 23 * u(rng), by = 59 * u(rng);
    auto smooth = [=](Position p, Position q) {
      return 140 + 10 * std::sin(p.x / ax + q.y / by) + 10 * std::cos(p.y / ay - q.x / bx);
    };
    const RegionPair pr{0,
                        {0, 100 + 100 * u(rng), 0, 150},
                        {300, 450, 20, 120 + 80 * u(rng)},
                        std::nullopt};
    const double coarse = compute_mitigation_factor(pr, smooth, 50);
    const double fine = compute_mitigation_factor(pr, smooth, 25);
    CHECK(fine <= coarse);
  }
}

TEST_CASE("oracles") {
  const std::vector<Rect> wall{{100, 110, 0, 100}};
  const auto pen = penetration_oracle(wall, 2140, 60);
  const auto est = crossing_estimate_oracle(wall, 2140, 140);
  const Position a{50, 50}, b{200, 50}, c{50, 90};
  CHECK(pen(a, b) == doctest::Approx(ue_ue_pathloss(0.15, 2140) + 60));
  CHECK(pen(a, c) == doctest::Approx(ue_ue_pathloss(0.04, 2140)));
  CHECK(est(a, b) == 140);
  CHECK(est(a, c) == doctest::Approx(ue_ue_pathloss(0.04, 2140)));
}

TEST_CASE("database build, admission and determinism") {
  const RadioMap m =
      planted({{{150, 300, 200, 900}, 60}, {{700, 850, 200, 900}, 60}});
  ExtractionParams p;
  std::vector<Rect> rects;
  for (const auto& o : detect_obstructions(m, p.detection_threshold_db)) rects.push_back(o.bounds);
  const auto oracle = crossing_estimate_oracle(rects, 2140, 140);
  const IsolationDatabase db = build_database(m, p, oracle, "estimate");
  REQUIRE(db.size() == 8);
  for (std::size_t i = 0; i < db.size(); ++i) {
    CHECK(db.pairs[i].k == static_cast<int>(i) + 1);
    CHECK(db.pairs[i].alpha_db == 140.0);
  }
  CHECK(db.provenance.map_id == map_fingerprint(m));
  CHECK(db == build_database(m, p, oracle, "estimate"));

  p.admission_threshold_db = 200;
  CHECK(build_database(m, p, oracle, "estimate").pairs.empty());
}

TEST_CASE("database file format") {
  IsolationDatabase db;
  db.provenance = {"fnv1a64:0000000000000001", ExtractionParams{}, "estimate"};
  for (int k = 1; k <= 8; ++k) {
    const double x = 100.0 * k;
    db.pairs.push_back({k, {x, x + 50, 0, 100}, {x, x + 50, 200, 300.5}, 140.0 + 0.1 * k});
  }
  const std::string text = format_database(db);
  CHECK(parse_database(text) == db);

  const auto dir = std::filesystem::temp_directory_path() / "geofd_db_test";
  std::filesystem::create_directories(dir);
  save_database(db, dir / "db.json");
  CHECK(load_database(dir / "db.json") == db);

  SUBCASE("overlapping regions") {
    IsolationDatabase bad = db;
    bad.pairs[1].b = Rect{200, 250, 50, 150};
    CHECK_THROWS_AS(parse_database(format_database(bad)), ValidationError);
  }
  SUBCASE("missing alpha names the entry") {
    IsolationDatabase bad = db;
    bad.pairs[2].alpha_db.reset();
    try {
      parse_database(format_database(bad));
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("entry 3") != std::string::npos);
      CHECK(std::string(e.what()).find("alpha_db") != std::string::npos);
    }
  }
  SUBCASE("wrong type names the field") {
    std::string broken = text;
    broken.replace(broken.find("\"k\": 2"), 6, "\"k\": \"2\"");
    try {
      parse_database(broken);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("'k'") != std::string::npos);
    }
  }
  SUBCASE("bad numbering") {
    IsolationDatabase bad = db;
    bad.pairs[4].k = 9;
    CHECK_THROWS_AS(validate(bad), ValidationError);
  }
  SUBCASE("not json") { CHECK_THROWS_AS(parse_database("{"), ParseError); }
}
