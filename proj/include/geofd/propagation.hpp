#pragma once

#include <optional>

#include "geofd/geometry.hpp"
#include "geofd/region_db.hpp"

namespace geofd {

struct Band {
  double low_mhz = 0.0;
  double high_mhz = 0.0;

  double center_mhz() const { return 0.5 * (low_mhz + high_mhz); }
  double width_mhz() const { return high_mhz - low_mhz; }

  friend bool operator==(const Band&, const Band&) = default;
};

struct LinkBudgetConfig {
  double noise_dbm = -100.0;
  double ue_tx_power_dbm = 20.0;
  double bs_tx_power_dbm = 46.0;
  // f1 carries downlink in half duplex and is the band shared by full-duplex pairs.
  Band dl_band{2100.0, 2180.0};
  Band ul_band{1900.0, 1980.0};
  double resource_bandwidth_hz = 400e3;

  // Carrier used for every UE-to-UE loss on a full-duplex resource.
  double shared_carrier_mhz() const { return dl_band.center_mhz(); }

  friend bool operator==(const LinkBudgetConfig&, const LinkBudgetConfig&) = default;
};

void validate(const LinkBudgetConfig& cfg);

/// UE-to-UE path loss in dB. Below 50 m free space 20 log10(4 pi d f / c);
/// from 50 m on 38.32 log10(d_km) + 21 log10(f_MHz) + 61.6. The two laws are
/// used as printed, including the step between them at exactly 50 m, which
/// belongs to the far law. Throws DomainError for d <= 0 or f <= 0.
double ue_ue_pathloss(double d_km, double f_mhz);

enum class LossSource { model, region_floor };

struct EffectivePathloss {
  double value_db = 0.0;
  LossSource source = LossSource::model;
};

// Largest alpha over database pairs that place u and v on opposite sides, if any.
std::optional<double> isolation_alpha(Position u, Position v, const IsolationDatabase& db);

/// max(1_isolated * alpha, p_vu), tagged with the term that won. Ties go to
/// the region floor.
EffectivePathloss effective_interuser_pathloss(Position u, Position v,
                                               const IsolationDatabase& db, double f_mhz);

// Interference at victim u from transmitter v (dBm).
double interference_power(double tx_power_dbm, const EffectivePathloss& loss);
double interference_power(double tx_power_dbm, Position victim, Position aggressor,
                          const IsolationDatabase& db, double f_mhz);

// Noise and interference add in linear power; everything else stays in dB.
double sinr_db(double signal_dbm, double noise_dbm, std::optional<double> interference_dbm);

// Shannon rate density log2(1 + SINR) in bit/s/Hz.
double rate_density(double sinr_db);

double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace geofd
