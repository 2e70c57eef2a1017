#include <doctest.h>

#include <cmath>
#include <limits>

#include "geofd/error.hpp"
#include "geofd/propagation.hpp"

using namespace geofd;

namespace {

IsolationDatabase one_pair(double alpha) {
  IsolationDatabase db;
  db.pairs.push_back({1, {0, 100, 0, 100}, {200, 300, 0, 100}, alpha});
  return db;
}

}  // namespace

TEST_CASE("golden UE-UE path loss values") {
  // Near law in the textbook constant form: 32.45 + 20 log10(d_km) + 20 log10(f_MHz).
  const double near_hand = 32.45 + 20 * std::log10(0.049) + 20 * std::log10(2000.0);
  CHECK(near_hand == doctest::Approx(72.27).epsilon(0.0001));
  CHECK(std::abs(ue_ue_pathloss(0.049, 2000) - 72.27) <= 0.01);
  CHECK(std::abs(ue_ue_pathloss(0.049, 2000) - near_hand) <= 0.01);

  const double far_hand = 38.32 * std::log10(0.05) + 21 * std::log10(2000.0) + 61.6;
  CHECK(std::abs(far_hand - 81.07) <= 0.01);
  CHECK(std::abs(ue_ue_pathloss(0.05, 2000) - 81.07) <= 0.01);
  CHECK(ue_ue_pathloss(0.05, 2000) == doctest::Approx(far_hand).epsilon(1e-14));
}

TEST_CASE("far-law slope") {
  for (double d : {0.05, 0.08, 0.3, 1.0}) {
    CHECK(ue_ue_pathloss(2 * d, 2140) - ue_ue_pathloss(d, 2140) ==
          doctest::Approx(38.32 * std::log10(2.0)).epsilon(1e-12));
  }
  CHECK(38.32 * std::log10(2.0) == doctest::Approx(11.54).epsilon(0.001));
}

TEST_CASE("near law doubles distance for 6 dB") {
  CHECK(ue_ue_pathloss(0.02, 2140) - ue_ue_pathloss(0.01, 2140) ==
        doctest::Approx(20 * std::log10(2.0)));
}

TEST_CASE("path loss domain") {
  CHECK_THROWS_AS(ue_ue_pathloss(0, 2000), DomainError);
  CHECK_THROWS_AS(ue_ue_pathloss(-0.1, 2000), DomainError);
  CHECK_THROWS_AS(ue_ue_pathloss(0.1, 0), DomainError);
}

TEST_CASE("effective inter-user loss") {
  const IsolationDatabase db = one_pair(140);
  SUBCASE("split across the pair") {
    const Position u{90, 50}, v{210, 50};
    const auto e = effective_interuser_pathloss(u, v, db, 2140);
    CHECK(e.value_db == 140);
    CHECK(e.source == LossSource::region_floor);
    CHECK(effective_interuser_pathloss(v, u, db, 2140).value_db == 140);
  }
  SUBCASE("30 m apart across a pair") {
    IsolationDatabase close;
    close.pairs.push_back({1, {0, 100, 0, 100}, {100.0001, 200, 0, 100}, 140.0});
    const Position u{85, 50}, v{115, 50};
    const double p = ue_ue_pathloss(0.03, 2140);
    CHECK(p == doctest::Approx(68.6).epsilon(0.002));
    const auto e = effective_interuser_pathloss(u, v, close, 2140);
    CHECK(e.value_db == 140);
    CHECK(e.source == LossSource::region_floor);
  }
  SUBCASE("outside all regions") {
    const Position u{500, 500}, v{530, 500};
    const auto e = effective_interuser_pathloss(u, v, db, 2140);
    CHECK(e.value_db == ue_ue_pathloss(0.03, 2140));
    CHECK(e.source == LossSource::model);
  }
  SUBCASE("same region side") {
    const auto e = effective_interuser_pathloss({10, 10}, {40, 10}, db, 2140);
    CHECK(e.source == LossSource::model);
  }
  SUBCASE("model loss above alpha wins") {
    const IsolationDatabase weak = one_pair(60);
    const auto e = effective_interuser_pathloss({0, 0}, {300, 100}, weak, 2140);
    CHECK(e.source == LossSource::model);
    CHECK(e.value_db > 60);
  }
  SUBCASE("largest alpha over several pairs") {
    IsolationDatabase two = db;
    two.pairs.push_back({2, {0, 50, 0, 50}, {250, 300, 50, 100}, 150.0});
    CHECK(isolation_alpha({10, 10}, {260, 60}, two) == 150.0);
    CHECK(isolation_alpha({90, 90}, {210, 10}, two) == 140.0);
    CHECK_FALSE(isolation_alpha({500, 500}, {210, 10}, two).has_value());
  }
}

TEST_CASE("interference power") {
  CHECK(interference_power(20, EffectivePathloss{140, LossSource::region_floor}) == -120.0);
  CHECK(interference_power(20, EffectivePathloss{ue_ue_pathloss(0.05, 2000), LossSource::model}) ==
        doctest::Approx(-61.07).epsilon(1e-4));
}

TEST_CASE("SINR composition and rate") {
  CHECK(rate_density(sinr_db(-100, -100, std::nullopt)) == doctest::Approx(1.0));
  CHECK(sinr_db(-80, -100, -100) == doctest::Approx(20 - 10 * std::log10(2.0)));
  CHECK(20 - sinr_db(-80, -100, -100) == doctest::Approx(3.0103).epsilon(1e-4));

  // Hand evaluation: N + I = 1e-10 mW + 1e-12 mW.
  const double hand = -80 - 10 * std::log10(1e-10 + 1e-12);
  const double s = sinr_db(-80, -100, -120);
  CHECK(s == doctest::Approx(hand).epsilon(1e-12));
  CHECK(s == doctest::Approx(19.957).epsilon(1e-4));
  CHECK(rate_density(s) == doctest::Approx(std::log2(1 + std::pow(10, hand / 10))));
  CHECK(rate_density(s) == doctest::Approx(6.644).epsilon(1e-3));

  CHECK(sinr_db(-80, -100, -std::numeric_limits<double>::infinity()) == doctest::Approx(20));
  CHECK(linear_to_db(db_to_linear(-37.5)) == doctest::Approx(-37.5));
}

TEST_CASE("link budget defaults") {
  LinkBudgetConfig cfg;
  CHECK(cfg.shared_carrier_mhz() == 2140);
  CHECK(cfg.dl_band.width_mhz() == 80);
  CHECK_NOTHROW(validate(cfg));
  cfg.resource_bandwidth_hz = 0;
  CHECK_THROWS_AS(validate(cfg), ValidationError);
}
