#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "geofd/geometry.hpp"
#include "geofd/hungarian.hpp"
#include "geofd/propagation.hpp"
#include "geofd/radio_map.hpp"
#include "geofd/region_db.hpp"

namespace geofd {

// Every scheduling decision that needs randomness draws from one of these.
using Rng = std::mt19937_64;

enum class Direction { downlink, uplink };

/// A scheduled user. Odd ids are downlink users, even ids uplink users.
struct User {
  int id = 0;
  Position position;
  // Uplink transmit power; downlink users receive from the BS.
  std::optional<double> tx_power_dbm;

  Direction direction() const { return id % 2 != 0 ? Direction::downlink : Direction::uplink; }
  bool is_downlink() const { return direction() == Direction::downlink; }
};

enum class BandId { f1_dl_shared, f2 };

struct FrequencyResource {
  int index = 0;  // 1-based
  BandId band = BandId::f1_dl_shared;
  double center_mhz = 0.0;
  double bandwidth_hz = 0.0;

  friend bool operator==(const FrequencyResource&, const FrequencyResource&) = default;
};

// Resources per band for the configured resource bandwidth.
int resources_per_band(const LinkBudgetConfig& cfg);

/// Resource f (1-based). Indices 1..N lie in the shared downlink band f1,
/// N+1..2N in f2, where N = resources_per_band(cfg).
FrequencyResource resource_at(const LinkBudgetConfig& cfg, int index);

enum class DuplexMode { full_duplex, hd_downlink, hd_uplink };

struct ResourceSlot {
  FrequencyResource resource;
  DuplexMode mode = DuplexMode::full_duplex;
  std::optional<int> dl_user;
  std::optional<int> ul_user;

  int user_count() const { return (dl_user ? 1 : 0) + (ul_user ? 1 : 0); }
};

/// The x_{u,f} mapping, stored per occupied resource in ascending index order.
struct Assignment {
  std::vector<ResourceSlot> slots;

  const ResourceSlot* slot_of(int user_id) const;
  double occupied_bandwidth_hz() const;
  int full_duplex_count() const;
};

// Structural check of the assignment constraints against the user set.
// Returns one message per violation; empty means compliant.
std::vector<std::string> constraint_violations(const Assignment& a, const std::vector<User>& users);

enum class RegionSide { a, b };

struct Membership {
  int k = 0;
  RegionSide side = RegionSide::a;

  friend bool operator==(const Membership&, const Membership&) = default;
};

// Aligned with the input users. Rectangles are closed; a user inside several
// regions takes the lowest k, side A before side B.
using RegionMembership = std::vector<std::optional<Membership>>;
RegionMembership classify_users(const std::vector<User>& users, const IsolationDatabase& db);

// Large finite stand-in for 1/r when a link's rate is zero (s*Hz/bit).
inline constexpr double kZeroRateCost = 1e9;

double inverse_rate_cost(double rate_density);

/// Pair costs 1/r_dl + 1/r_ul. Rows are downlink users and columns uplink
/// users, both in ascending id order. The downlink rate sees the uplink user
/// as co-channel interferer on the shared band center; the uplink rate does
/// not depend on the pairing.
struct PairCosts {
  std::vector<int> dl_ids;
  std::vector<int> ul_ids;
  CostMatrix cost;
};

PairCosts build_cost_matrix(const std::vector<User>& users, const IsolationDatabase& db,
                            const LinkBudgetConfig& cfg, const RadioMap& map);

// Same costs with the UE-to-UE loss evaluated at an arbitrary carrier.
double pair_cost(const User& dl, const User& ul, const IsolationDatabase& db,
                 const LinkBudgetConfig& cfg, const RadioMap& map, double carrier_mhz);

struct OptimalOptions {
  // Re-assign matched pairs to resources with costs evaluated at each
  // resource's own center frequency (second matching over pairs x resources).
  bool per_resource_carrier = false;
};

/// Optimal pairing from a cost matrix. Matched pairs go to full-duplex
/// resources 1, 2, ... in ascending downlink-row order; users matched to
/// padding get half-duplex resources after them.
Assignment solve_optimal(const PairCosts& costs, const LinkBudgetConfig& cfg);

Assignment schedule_optimal(const std::vector<User>& users, const IsolationDatabase& db,
                            const LinkBudgetConfig& cfg, const RadioMap& map,
                            OptimalOptions options = {});

/// Algorithm 1 step 1 followed by random full-duplex pairing of everyone left.
Assignment schedule_fdregrand(const std::vector<User>& users, const IsolationDatabase& db,
                              const LinkBudgetConfig& cfg, Rng& rng);

/// Algorithm 1 step 1 followed by half-duplex service of everyone left:
/// leftover downlink users first, then leftover uplink users, each group in
/// random order.
Assignment schedule_fdreghdelse(const std::vector<User>& users, const IsolationDatabase& db,
                                const LinkBudgetConfig& cfg, Rng& rng);

Assignment schedule_fdrand(const std::vector<User>& users, const LinkBudgetConfig& cfg, Rng& rng);

// Downlink users on f1, uplink users on f2, one user per resource.
Assignment schedule_hd(const std::vector<User>& users, const LinkBudgetConfig& cfg, Rng& rng);

// Sum of pair costs over the full-duplex slots.
double assignment_objective(const Assignment& a, const PairCosts& costs);

std::string to_string(DuplexMode mode);
std::string to_string(BandId band);

// One line per resource: resource,band,center_mhz,mode,dl_user,ul_user.
std::string format_assignment_csv(const Assignment& a);

}  // namespace geofd
