#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace geofd::cli {

// Flag values shared by the subcommands; unset flags fall back to the config.
struct CommonOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out{"."};
  unsigned threads = 0;
};

struct SimulateOptions {
  std::filesystem::path map;
  std::filesystem::path db;
  std::optional<int> trials;
  std::vector<std::string> schemes;
};

struct ScheduleOptions {
  std::filesystem::path map;
  std::filesystem::path db;
  std::string scheme = "FDregrand";
};

// Each command writes its products plus config.resolved.json into opts.out,
// which must already exist. Files are written whole or not at all.
void gen_map(const CommonOptions& opts, std::ostream& log);
void build_db(const CommonOptions& opts, const std::filesystem::path& map_path, std::ostream& log,
              std::ostream& warn);
void simulate(const CommonOptions& opts, const SimulateOptions& sim, std::ostream& log);
// One drop, one scheme: users.csv and assignment.csv.
void schedule(const CommonOptions& opts, const ScheduleOptions& sched, std::ostream& log);

inline constexpr const char* kMapFile = "map.txt";
inline constexpr const char* kDatabaseFile = "regions.json";
inline constexpr const char* kResolvedConfigFile = "config.resolved.json";

}  // namespace geofd::cli
