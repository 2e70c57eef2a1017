#include "geofd/propagation.hpp"

#include <cmath>
#include <numbers>

#include "geofd/error.hpp"

namespace geofd {

namespace {

constexpr double kSpeedOfLight = 299792458.0;
constexpr double kFarModelStartKm = 0.05;

bool split_across(const RegionPair& p, Position u, Position v) {
  return (p.a.contains(u) && p.b.contains(v)) || (p.b.contains(u) && p.a.contains(v));
}

}  // namespace

void validate(const LinkBudgetConfig& cfg) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(cfg.noise_dbm) || !finite(cfg.ue_tx_power_dbm) || !finite(cfg.bs_tx_power_dbm)) {
    throw ValidationError("link budget powers must be finite");
  }
  if (!(cfg.dl_band.width_mhz() > 0.0) || !(cfg.ul_band.width_mhz() > 0.0) ||
      !(cfg.dl_band.low_mhz > 0.0) || !(cfg.ul_band.low_mhz > 0.0)) {
    throw ValidationError("frequency bands must be non-degenerate and positive");
  }
  if (!(cfg.resource_bandwidth_hz > 0.0)) {
    throw ValidationError("resource bandwidth must be positive");
  }
}

double ue_ue_pathloss(double d_km, double f_mhz) {
  if (!(d_km > 0.0) || !(f_mhz > 0.0)) {
    throw DomainError("ue_ue_pathloss needs positive distance and frequency");
  }
  if (d_km < kFarModelStartKm) {
    const double d_m = d_km * 1e3;
    const double f_hz = f_mhz * 1e6;
    return 20.0 * std::log10(4.0 * std::numbers::pi * d_m * f_hz / kSpeedOfLight);
  }
  return 38.32 * std::log10(d_km) + 21.0 * std::log10(f_mhz) + 61.6;
}

std::optional<double> isolation_alpha(Position u, Position v, const IsolationDatabase& db) {
  std::optional<double> best;
  for (const auto& p : db.pairs) {
    if (!p.alpha_db || !split_across(p, u, v)) continue;
    if (!best || *p.alpha_db > *best) best = *p.alpha_db;
  }
  return best;
}

EffectivePathloss effective_interuser_pathloss(Position u, Position v,
                                               const IsolationDatabase& db, double f_mhz) {
  const double model = ue_ue_pathloss(distance_m(u, v) / 1e3, f_mhz);
  if (const auto alpha = isolation_alpha(u, v, db); alpha && *alpha >= model) {
    return {*alpha, LossSource::region_floor};
  }
  return {model, LossSource::model};
}

double interference_power(double tx_power_dbm, const EffectivePathloss& loss) {
  return tx_power_dbm - loss.value_db;
}

double interference_power(double tx_power_dbm, Position victim, Position aggressor,
                          const IsolationDatabase& db, double f_mhz) {
  return interference_power(tx_power_dbm,
                            effective_interuser_pathloss(victim, aggressor, db, f_mhz));
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double sinr_db(double signal_dbm, double noise_dbm, std::optional<double> interference_dbm) {
  if (!interference_dbm) return signal_dbm - noise_dbm;
  return signal_dbm - linear_to_db(db_to_linear(noise_dbm) + db_to_linear(*interference_dbm));
}

double rate_density(double sinr) { return std::log2(1.0 + db_to_linear(sinr)); }

}  // namespace geofd
