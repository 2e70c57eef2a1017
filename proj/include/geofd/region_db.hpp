#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "geofd/geometry.hpp"
#include "geofd/radio_map.hpp"

namespace geofd {

// Maximal 4-connected set of high-loss pixels.
struct Obstruction {
  std::vector<GridIndex> pixels;
  Rect bounds;
};

using Region = Rect;

// Two regions isolated from each other by at least alpha_db of attenuation.
struct RegionPair {
  int k = 0;
  Region a;
  Region b;
  std::optional<double> alpha_db;

  friend bool operator==(const RegionPair&, const RegionPair&) = default;
};

struct ExtractionParams {
  double detection_threshold_db = 120.0;
  double band_width_m = 100.0;
  double admission_threshold_db = 100.0;
  double sampling_step_m = 50.0;
  int split_count = 2;

  friend bool operator==(const ExtractionParams&, const ExtractionParams&) = default;
};

void validate(const ExtractionParams& params);

struct Provenance {
  std::string map_id;
  ExtractionParams params;
  std::string oracle;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct IsolationDatabase {
  std::vector<RegionPair> pairs;
  Provenance provenance;

  std::size_t size() const { return pairs.size(); }
  friend bool operator==(const IsolationDatabase&, const IsolationDatabase&) = default;
};

// Checks index numbering, region geometry and alpha presence; throws
// ValidationError naming the offending entry.
void validate(const IsolationDatabase& db);

// Attenuation in dB between a transmitter at the first position and a
// receiver at the second.
using AttenuationOracle = std::function<double(Position, Position)>;

/// Inter-user path loss at carrier_mhz, plus penetration_db for every
/// obstruction footprint the straight segment between the users touches.
AttenuationOracle penetration_oracle(std::vector<Rect> obstructions, double carrier_mhz,
                                     double penetration_db);

/// Fixed attenuation estimate for any segment that crosses an obstruction,
/// inter-user path loss otherwise.
AttenuationOracle crossing_estimate_oracle(std::vector<Rect> obstructions, double carrier_mhz,
                                           double estimate_db);

// Pixels with loss >= threshold_db, grouped into 4-connected components.
// Components are ordered by their first pixel in row-major scan order.
std::vector<Obstruction> detect_obstructions(const RadioMap& map, double threshold_db);

/// Bands of width d flush against the four sides of the obstruction's
/// bounding box, clipped to the map. North pairs with south (north is A) and
/// east with west (east is A). With split_count 2 each band is cut in half
/// across its length and facing halves are paired. A pair is dropped when
/// either band clips to zero area. Alpha is left unset.
std::vector<RegionPair> build_region_pairs(const Obstruction& obstruction,
                                           const ExtractionParams& params, const RadioMap& map);

// Lattice coordinates lo, lo + step, ... strictly below hi, then hi itself.
std::vector<double> lattice_axis(double lo, double hi, double step);

/// Minimum of attenuation(p_a, p_b) over every cross pair of lattice points
/// sampled in A and B. Lattices always include the region corners, and a
/// lattice at step/2 contains the lattice at step.
double compute_mitigation_factor(const RegionPair& pair, const AttenuationOracle& attenuation,
                                 double step_m);

IsolationDatabase build_database(const RadioMap& map, const ExtractionParams& params,
                                 const AttenuationOracle& attenuation,
                                 std::string oracle_label = "custom");

std::string format_database(const IsolationDatabase& db);
IsolationDatabase parse_database(const std::string& text);
void save_database(const IsolationDatabase& db, const std::filesystem::path& path);
IsolationDatabase load_database(const std::filesystem::path& path);

}  // namespace geofd
