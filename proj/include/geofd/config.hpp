#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "geofd/propagation.hpp"
#include "geofd/radio_map.hpp"
#include "geofd/region_db.hpp"
#include "geofd/sim.hpp"

namespace geofd {

enum class OracleKind { penetration, crossing_estimate };

struct OracleConfig {
  OracleKind kind = OracleKind::penetration;
  // Penetration loss per crossed obstruction, or the fixed crossing estimate.
  double value_db = 60.0;
};

std::string to_string(OracleKind k);

struct SimulationConfig {
  int n_dl = 200;
  int n_ul = 200;
  double min_spacing_m = 1.0;
  bool exclude_obstructions = true;
  int placement_attempts_per_user = 10000;
  std::vector<Scheme> schemes{Scheme::hd, Scheme::fdrand, Scheme::fdregrand,
                              Scheme::fdreghdelse};
  int trials = 100;
  std::vector<double> bs_tx_powers_dbm{46.0, 20.0};
  double cell_center_radius_m = 300.0;
  bool per_resource_carrier = false;
};

/// Everything a command needs. Unset keys keep the defaults below, which
/// follow the reference simulation parameters.
struct RunConfig {
  std::uint64_t seed = 1;
  SyntheticMapSpec map;
  // Recorded in the echoed config only; the synthetic map is planar.
  double antenna_height_m = 10.0;
  ExtractionParams extraction;
  OracleConfig oracle;
  LinkBudgetConfig link;
  SimulationConfig simulation;
};

// Parses and validates; unknown keys and wrong types raise ParseError,
// inconsistent values ValidationError.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);
void validate(const RunConfig& cfg);

// Fully resolved config, every key present. Parsing it gives back cfg.
std::string format_run_config(const RunConfig& cfg);

// Oracle built from the obstructions detected in map.
AttenuationOracle make_oracle(const RunConfig& cfg, const RadioMap& map);
std::string oracle_label(const OracleConfig& oracle);

// Scenario for one BS power.
ScenarioConfig scenario_for(const RunConfig& cfg, double bs_tx_power_dbm);

}  // namespace geofd
