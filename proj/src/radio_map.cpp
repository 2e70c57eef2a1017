#include "geofd/radio_map.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "geofd/error.hpp"
#include "geofd/format.hpp"

namespace geofd {

namespace {

constexpr double kMinBaselineDistanceM = 1.0;

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_number(std::string_view tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && std::isfinite(out);
}

bool parse_int(std::string_view tok, int& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc{} && ptr == tok.data() + tok.size();
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw ParseError("radio map line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

RadioMap::RadioMap(Position origin, double pixel_size_m, int n_cols, int n_rows,
                   Position bs_position, std::vector<double> pathloss_db)
    : origin_(origin),
      pixel_size_(pixel_size_m),
      n_cols_(n_cols),
      n_rows_(n_rows),
      bs_position_(bs_position),
      pathloss_(std::move(pathloss_db)) {
  if (!(pixel_size_ > 0.0) || !std::isfinite(pixel_size_)) {
    throw ValidationError("radio map pixel size must be positive and finite");
  }
  if (n_cols_ <= 0 || n_rows_ <= 0) {
    throw ValidationError("radio map dimensions must be positive");
  }
  if (!std::isfinite(origin_.x) || !std::isfinite(origin_.y) || !std::isfinite(bs_position_.x) ||
      !std::isfinite(bs_position_.y)) {
    throw ValidationError("radio map coordinates must be finite");
  }
  if (pathloss_.size() != static_cast<std::size_t>(n_cols_) * static_cast<std::size_t>(n_rows_)) {
    throw ValidationError("radio map holds " + std::to_string(pathloss_.size()) +
                          " values, expected " + std::to_string(n_cols_) + " x " +
                          std::to_string(n_rows_));
  }
  for (std::size_t i = 0; i < pathloss_.size(); ++i) {
    if (!std::isfinite(pathloss_[i]) || pathloss_[i] < 0.0) {
      throw ValidationError("radio map pixel (col " + std::to_string(i % n_cols_) + ", row " +
                            std::to_string(i / n_cols_) + ") is not a finite value >= 0 dB");
    }
  }
}

Rect RadioMap::bounds() const {
  return {origin_.x, origin_.x + width_m(), origin_.y, origin_.y + height_m()};
}

Position RadioMap::pixel_center(int col, int row) const {
  return {origin_.x + (col + 0.5) * pixel_size_, origin_.y + (row + 0.5) * pixel_size_};
}

Rect RadioMap::pixel_rect(int col, int row) const {
  return {origin_.x + col * pixel_size_, origin_.x + (col + 1) * pixel_size_,
          origin_.y + row * pixel_size_, origin_.y + (row + 1) * pixel_size_};
}

GridIndex RadioMap::locate(Position pos) const {
  if (!bounds().contains(pos)) {
    throw BoundsError("position " + to_string(pos) + " outside radio map " + to_string(bounds()));
  }
  int col = static_cast<int>(std::floor((pos.x - origin_.x) / pixel_size_));
  int row = static_cast<int>(std::floor((pos.y - origin_.y) / pixel_size_));
  col = std::clamp(col, 0, n_cols_ - 1);
  row = std::clamp(row, 0, n_rows_ - 1);
  return {col, row};
}

double pathloss_at(const RadioMap& map, Position pos) { return map.at(map.locate(pos)); }

void validate(const SyntheticMapSpec& spec) {
  if (!(spec.width_m > 0.0) || !(spec.height_m > 0.0)) {
    throw ValidationError("synthetic map area must be positive");
  }
  if (!(spec.pixel_size_m > 0.0)) throw ValidationError("synthetic map pixel size must be positive");
  const double cols = spec.width_m / spec.pixel_size_m;
  const double rows = spec.height_m / spec.pixel_size_m;
  if (std::abs(cols - std::round(cols)) > 1e-9 || std::abs(rows - std::round(rows)) > 1e-9) {
    throw ValidationError("synthetic map area must be a whole number of pixels");
  }
  if (!(spec.exponent > 0.0)) throw ValidationError("propagation exponent must be positive");
  if (!(spec.carrier_mhz > 0.0)) throw ValidationError("carrier frequency must be positive");
  const Rect area{spec.origin.x, spec.origin.x + spec.width_m, spec.origin.y,
                  spec.origin.y + spec.height_m};
  for (std::size_t i = 0; i < spec.obstructions.size(); ++i) {
    const auto& o = spec.obstructions[i];
    const std::string which = "obstruction " + std::to_string(i + 1);
    if (!o.footprint.has_positive_area()) throw ValidationError(which + " has no area");
    if (o.footprint.x_min < area.x_min || o.footprint.x_max > area.x_max ||
        o.footprint.y_min < area.y_min || o.footprint.y_max > area.y_max) {
      throw ValidationError(which + " lies outside the map area");
    }
    if (!(o.penetration_db > 0.0)) throw ValidationError(which + " penetration must be > 0 dB");
  }
}

double synthetic_baseline_db(double d_m, double carrier_mhz, double exponent) {
  // Free-space loss at 1 m, then 10 n log10(d / 1 m).
  const double d = std::max(d_m, kMinBaselineDistanceM);
  return 32.45 + 20.0 * std::log10(carrier_mhz) - 60.0 + 10.0 * exponent * std::log10(d);
}

RadioMap generate_synthetic_map(const SyntheticMapSpec& spec, std::uint64_t /*seed*/) {
  validate(spec);
  const int n_cols = static_cast<int>(std::lround(spec.width_m / spec.pixel_size_m));
  const int n_rows = static_cast<int>(std::lround(spec.height_m / spec.pixel_size_m));
  std::vector<double> values(static_cast<std::size_t>(n_cols) * n_rows);
  for (int r = 0; r < n_rows; ++r) {
    for (int c = 0; c < n_cols; ++c) {
      const Position center{spec.origin.x + (c + 0.5) * spec.pixel_size_m,
                            spec.origin.y + (r + 0.5) * spec.pixel_size_m};
      // Accumulate in centi-dB so every stored value is the double nearest a
      // two-decimal number.
      long long centi = std::llround(
          100.0 * synthetic_baseline_db(distance_m(center, spec.bs_position), spec.carrier_mhz,
                                        spec.exponent));
      for (const auto& o : spec.obstructions) {
        if (o.footprint.contains(center)) centi += std::llround(100.0 * o.penetration_db);
      }
      values[static_cast<std::size_t>(r) * n_cols + c] =
          static_cast<double>(std::max(centi, 0LL)) / 100.0;
    }
  }
  return RadioMap(spec.origin, spec.pixel_size_m, n_cols, n_rows, spec.bs_position,
                  std::move(values));
}

std::string format_radio_map(const RadioMap& map) {
  std::string out;
  out += format_number(map.origin().x) + ' ' + format_number(map.origin().y) + '\n';
  out += format_number(map.pixel_size()) + '\n';
  out += std::to_string(map.n_cols()) + ' ' + std::to_string(map.n_rows()) + '\n';
  out += format_number(map.bs_position().x) + ' ' + format_number(map.bs_position().y) + '\n';
  for (int r = 0; r < map.n_rows(); ++r) {
    for (int c = 0; c < map.n_cols(); ++c) {
      if (c > 0) out += ' ';
      out += format_number(map.at(c, r));
    }
    out += '\n';
  }
  return out;
}

RadioMap parse_radio_map(const std::string& text) {
  std::vector<std::string_view> lines;
  std::string_view all(text);
  std::size_t start = 0;
  while (start <= all.size()) {
    std::size_t nl = all.find('\n', start);
    if (nl == std::string_view::npos) nl = all.size();
    lines.push_back(all.substr(start, nl - start));
    start = nl + 1;
  }
  while (!lines.empty() && split_ws(lines.back()).empty()) lines.pop_back();
  if (lines.size() < 4) fail(lines.size() + 1, "truncated header (need 4 header lines)");

  auto numbers = [&](std::size_t idx, std::size_t expected, const char* what) {
    auto toks = split_ws(lines[idx]);
    if (toks.size() != expected) {
      fail(idx + 1, std::string("expected ") + what);
    }
    std::vector<double> v(expected);
    for (std::size_t i = 0; i < expected; ++i) {
      if (!parse_number(toks[i], v[i])) fail(idx + 1, std::string("non-numeric ") + what);
    }
    return v;
  };

  const auto origin = numbers(0, 2, "'origin_x origin_y'");
  const auto pixel = numbers(1, 1, "'pixel_size'");
  auto dims = split_ws(lines[2]);
  int n_cols = 0;
  int n_rows = 0;
  if (dims.size() != 2 || !parse_int(dims[0], n_cols) || !parse_int(dims[1], n_rows) ||
      n_cols <= 0 || n_rows <= 0) {
    fail(3, "expected positive integers 'n_cols n_rows'");
  }
  const auto bs = numbers(3, 2, "'bs_x bs_y'");
  if (!(pixel[0] > 0.0)) fail(2, "pixel size must be positive");

  const std::size_t data_lines = lines.size() - 4;
  if (data_lines != static_cast<std::size_t>(n_rows)) {
    fail(lines.size(), "header declares " + std::to_string(n_rows) + " rows but file has " +
                           std::to_string(data_lines));
  }
  std::vector<double> values(static_cast<std::size_t>(n_cols) * n_rows);
  for (int r = 0; r < n_rows; ++r) {
    const std::size_t line_no = 4 + static_cast<std::size_t>(r) + 1;
    auto toks = split_ws(lines[4 + r]);
    if (toks.size() != static_cast<std::size_t>(n_cols)) {
      fail(line_no, "row " + std::to_string(r) + " has " + std::to_string(toks.size()) +
                        " values, header declares " + std::to_string(n_cols) + " columns");
    }
    for (int c = 0; c < n_cols; ++c) {
      double v = 0.0;
      if (!parse_number(toks[c], v)) {
        fail(line_no, "row " + std::to_string(r) + ", column " + std::to_string(c) +
                          ": non-numeric value '" + std::string(toks[c]) + "'");
      }
      if (v < 0.0) {
        fail(line_no, "row " + std::to_string(r) + ", column " + std::to_string(c) +
                          ": negative path loss " + std::string(toks[c]));
      }
      values[static_cast<std::size_t>(r) * n_cols + c] = v;
    }
  }
  return RadioMap({origin[0], origin[1]}, pixel[0], n_cols, n_rows, {bs[0], bs[1]},
                  std::move(values));
}

RadioMap load_radio_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open radio map '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_radio_map(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_radio_map(const RadioMap& map, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot write radio map '" + path.string() + "'");
  out << format_radio_map(map);
  if (!out) throw ParseError("write failed for '" + path.string() + "'");
}

std::string map_fingerprint(const RadioMap& map) {
  // FNV-1a over the canonical text form.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : format_radio_map(map)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << "fnv1a64:" << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

}  // namespace geofd
