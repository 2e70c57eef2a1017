#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "geofd/geometry.hpp"

namespace geofd {

struct GridIndex {
  int col = 0;
  int row = 0;

  friend bool operator==(const GridIndex&, const GridIndex&) = default;
};

/// Grid of base-station-to-pixel path loss values in dB.
///
/// Pixels are square. Row 0 is the southernmost row and column 0 the
/// westernmost column; pixel (c, r) spans
/// [origin.x + c * pixel, origin.x + (c + 1) * pixel) horizontally.
/// A position on an edge shared by two pixels belongs to the pixel with the
/// larger column (then row) index. The outer north/east boundary belongs to
/// the last column/row. Immutable after construction.
class RadioMap {
 public:
  RadioMap(Position origin, double pixel_size_m, int n_cols, int n_rows, Position bs_position,
           std::vector<double> pathloss_db);

  Position origin() const { return origin_; }
  double pixel_size() const { return pixel_size_; }
  int n_cols() const { return n_cols_; }
  int n_rows() const { return n_rows_; }
  Position bs_position() const { return bs_position_; }

  double width_m() const { return pixel_size_ * n_cols_; }
  double height_m() const { return pixel_size_ * n_rows_; }
  Rect bounds() const;

  double at(int col, int row) const { return pathloss_[index(col, row)]; }
  double at(GridIndex g) const { return at(g.col, g.row); }
  std::span<const double> values() const { return pathloss_; }

  Position pixel_center(int col, int row) const;
  Rect pixel_rect(int col, int row) const;

  // Pixel containing pos under the tie rule above; throws BoundsError when
  // pos lies outside bounds().
  GridIndex locate(Position pos) const;

  friend bool operator==(const RadioMap&, const RadioMap&) = default;

 private:
  std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(n_cols_) +
           static_cast<std::size_t>(col);
  }

  Position origin_;
  double pixel_size_;
  int n_cols_;
  int n_rows_;
  Position bs_position_;
  std::vector<double> pathloss_;
};

// Nearest-pixel lookup, no interpolation.
double pathloss_at(const RadioMap& map, Position pos);

// Rectangular obstruction planted into a synthetic map.
struct PlantedObstruction {
  Rect footprint;
  double penetration_db = 0.0;
};

struct SyntheticMapSpec {
  Position origin{0.0, 0.0};
  double width_m = 1050.0;
  double height_m = 1100.0;
  double pixel_size_m = 50.0;
  Position bs_position{525.0, 550.0};
  // Log-distance exponent referenced to free space at 1 m; 2 gives exactly
  // 32.45 + 20 log10(d_km) + 20 log10(f_MHz).
  double exponent = 2.0;
  double carrier_mhz = 2140.0;
  std::vector<PlantedObstruction> obstructions;
};

// Throws ValidationError for degenerate specs.
void validate(const SyntheticMapSpec& spec);

// Baseline loss at distance d_m from the BS, before rounding to the grid
// resolution. Distances below 1 m are evaluated at 1 m.
double synthetic_baseline_db(double d_m, double carrier_mhz, double exponent);

/// Per-pixel loss is the baseline at the pixel-center distance plus the
/// penetration of every obstruction whose footprint covers the pixel center.
/// Values are kept at 0.01 dB resolution so they survive a text round-trip.
/// The model has no random component, so the output does not depend on seed.
RadioMap generate_synthetic_map(const SyntheticMapSpec& spec, std::uint64_t seed);

RadioMap load_radio_map(const std::filesystem::path& path);
RadioMap parse_radio_map(const std::string& text);
void save_radio_map(const RadioMap& map, const std::filesystem::path& path);
std::string format_radio_map(const RadioMap& map);

// Stable content hash, used as the map identifier in database provenance.
std::string map_fingerprint(const RadioMap& map);

}  // namespace geofd
