#include "geofd/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "geofd/error.hpp"

namespace geofd {

namespace {

struct UserIndex {
  std::vector<const User*> dl;  // ascending id
  std::vector<const User*> ul;  // ascending id
  std::unordered_map<int, const User*> by_id;
};

UserIndex index_users(const std::vector<User>& users) {
  UserIndex idx;
  for (const auto& u : users) {
    if (u.id <= 0) throw ContractError("user ids must be positive, got " + std::to_string(u.id));
    if (!idx.by_id.emplace(u.id, &u).second) {
      throw ContractError("duplicate user id " + std::to_string(u.id));
    }
    (u.is_downlink() ? idx.dl : idx.ul).push_back(&u);
  }
  auto by_id = [](const User* a, const User* b) { return a->id < b->id; };
  std::sort(idx.dl.begin(), idx.dl.end(), by_id);
  std::sort(idx.ul.begin(), idx.ul.end(), by_id);
  return idx;
}

double uplink_power(const User& u, const LinkBudgetConfig& cfg) {
  return u.tx_power_dbm.value_or(cfg.ue_tx_power_dbm);
}

// Hands out consecutive resource indices starting at 1.
class ResourceCounter {
 public:
  explicit ResourceCounter(const LinkBudgetConfig& cfg) : cfg_(cfg) {}

  ResourceSlot full_duplex(int dl, int ul) {
    const int per_band = resources_per_band(cfg_);
    if (next_ > per_band) {
      throw CapacityError("full-duplex pair needs resource " + std::to_string(next_) +
                          " but the shared band holds " + std::to_string(per_band));
    }
    return {resource_at(cfg_, next_++), DuplexMode::full_duplex, dl, ul};
  }
  ResourceSlot half_duplex(const User& u) {
    const FrequencyResource r = resource_at(cfg_, next_++);
    if (u.is_downlink()) return {r, DuplexMode::hd_downlink, u.id, std::nullopt};
    return {r, DuplexMode::hd_uplink, std::nullopt, u.id};
  }
  int next() const { return next_; }

 private:
  const LinkBudgetConfig& cfg_;
  int next_ = 1;
};

struct StepOne {
  std::vector<ResourceSlot> slots;
  std::vector<const User*> dl_left;  // ascending id
  std::vector<const User*> ul_left;
};

// Algorithm 1, step 1: for each pair k, DL in A_k with UL in B_k, then UL in
// A_k with DL in B_k, each matched in ascending id order up to the smaller count.
StepOne region_step(const UserIndex& idx, const std::vector<User>& users,
                    const IsolationDatabase& db, ResourceCounter& counter) {
  const RegionMembership membership = classify_users(users, db);
  std::unordered_map<int, std::optional<Membership>> member_of;
  for (std::size_t i = 0; i < users.size(); ++i) member_of[users[i].id] = membership[i];

  auto select = [&](const std::vector<const User*>& pool, int k, RegionSide side) {
    std::vector<const User*> out;
    for (const User* u : pool) {
      const auto& m = member_of[u->id];
      if (m && m->k == k && m->side == side) out.push_back(u);
    }
    return out;
  };

  StepOne step;
  std::set<int> scheduled;
  for (const auto& pair : db.pairs) {
    auto pair_up = [&](const std::vector<const User*>& dls, const std::vector<const User*>& uls) {
      const std::size_t n = std::min(dls.size(), uls.size());
      for (std::size_t l = 0; l < n; ++l) {
        step.slots.push_back(counter.full_duplex(dls[l]->id, uls[l]->id));
        scheduled.insert(dls[l]->id);
        scheduled.insert(uls[l]->id);
      }
    };
    pair_up(select(idx.dl, pair.k, RegionSide::a), select(idx.ul, pair.k, RegionSide::b));
    pair_up(select(idx.dl, pair.k, RegionSide::b), select(idx.ul, pair.k, RegionSide::a));
  }
  for (const User* u : idx.dl) {
    if (!scheduled.contains(u->id)) step.dl_left.push_back(u);
  }
  for (const User* u : idx.ul) {
    if (!scheduled.contains(u->id)) step.ul_left.push_back(u);
  }
  return step;
}

void require_equal_counts(const UserIndex& idx, const char* scheme) {
  if (idx.dl.size() != idx.ul.size()) {
    throw ContractError(std::string(scheme) + " needs equal downlink and uplink counts (" +
                        std::to_string(idx.dl.size()) + " vs " + std::to_string(idx.ul.size()) +
                        ")");
  }
}

}  // namespace

int resources_per_band(const LinkBudgetConfig& cfg) {
  return static_cast<int>(std::floor(cfg.dl_band.width_mhz() * 1e6 / cfg.resource_bandwidth_hz +
                                     1e-9));
}

FrequencyResource resource_at(const LinkBudgetConfig& cfg, int index) {
  const int per_band = resources_per_band(cfg);
  if (index < 1 || index > 2 * per_band) {
    throw CapacityError("resource index " + std::to_string(index) + " outside 1.." +
                        std::to_string(2 * per_band));
  }
  const bool shared = index <= per_band;
  const Band& band = shared ? cfg.dl_band : cfg.ul_band;
  const int offset = shared ? index - 1 : index - per_band - 1;
  const double bw_mhz = cfg.resource_bandwidth_hz / 1e6;
  return {index, shared ? BandId::f1_dl_shared : BandId::f2,
          band.low_mhz + (offset + 0.5) * bw_mhz, cfg.resource_bandwidth_hz};
}

const ResourceSlot* Assignment::slot_of(int user_id) const {
  for (const auto& s : slots) {
    if (s.dl_user == user_id || s.ul_user == user_id) return &s;
  }
  return nullptr;
}

double Assignment::occupied_bandwidth_hz() const {
  double total = 0.0;
  for (const auto& s : slots) total += s.resource.bandwidth_hz;
  return total;
}

int Assignment::full_duplex_count() const {
  return static_cast<int>(std::count_if(slots.begin(), slots.end(), [](const ResourceSlot& s) {
    return s.mode == DuplexMode::full_duplex;
  }));
}

std::vector<std::string> constraint_violations(const Assignment& a,
                                               const std::vector<User>& users) {
  std::vector<std::string> out;
  std::map<int, int> appearances;
  for (const auto& u : users) {
    if (!appearances.emplace(u.id, 0).second) {
      out.push_back("duplicate user id " + std::to_string(u.id));
    }
  }
  std::set<int> resources;
  for (const auto& s : a.slots) {
    const std::string where = "resource " + std::to_string(s.resource.index);
    if (!resources.insert(s.resource.index).second) out.push_back(where + " used twice");
    // x_{u,f} summed over odd and even u.
    int odd = 0;
    int even = 0;
    for (const auto& id : {s.dl_user, s.ul_user}) {
      if (!id) continue;
      (*id % 2 != 0 ? odd : even) += 1;
      auto it = appearances.find(*id);
      if (it == appearances.end()) {
        out.push_back(where + " carries unknown user " + std::to_string(*id));
      } else {
        ++it->second;
      }
    }
    if (s.dl_user && s.ul_user && *s.dl_user == *s.ul_user) {
      out.push_back(where + " lists user " + std::to_string(*s.dl_user) + " twice");
    }
    if (s.dl_user && *s.dl_user % 2 == 0) out.push_back(where + " has an even id in the DL slot");
    if (s.ul_user && *s.ul_user % 2 != 0) out.push_back(where + " has an odd id in the UL slot");
    switch (s.mode) {
      case DuplexMode::full_duplex:
        if (odd + even != 2) out.push_back(where + ": full-duplex resource carries " +
                                           std::to_string(odd + even) + " users");
        if (odd != 1) out.push_back(where + ": full-duplex resource needs exactly one DL user");
        if (even != 1) out.push_back(where + ": full-duplex resource needs exactly one UL user");
        if (s.resource.band != BandId::f1_dl_shared) {
          out.push_back(where + ": full-duplex resource outside the shared band");
        }
        break;
      case DuplexMode::hd_downlink:
        if (odd != 1 || even != 0) out.push_back(where + ": DL half-duplex resource must carry one DL user");
        break;
      case DuplexMode::hd_uplink:
        if (even != 1 || odd != 0) out.push_back(where + ": UL half-duplex resource must carry one UL user");
        break;
    }
  }
  for (const auto& [id, n] : appearances) {
    if (n != 1) {
      out.push_back("user " + std::to_string(id) + " assigned to " + std::to_string(n) +
                    " resources");
    }
  }
  return out;
}

RegionMembership classify_users(const std::vector<User>& users, const IsolationDatabase& db) {
  RegionMembership out(users.size());
  for (std::size_t i = 0; i < users.size(); ++i) {
    for (const auto& p : db.pairs) {
      if (p.a.contains(users[i].position)) {
        out[i] = Membership{p.k, RegionSide::a};
      } else if (p.b.contains(users[i].position)) {
        out[i] = Membership{p.k, RegionSide::b};
      }
      if (out[i]) break;
    }
  }
  return out;
}

double inverse_rate_cost(double r) {
  if (!(r > 0.0)) return kZeroRateCost;
  return std::min(1.0 / r, kZeroRateCost);
}

double pair_cost(const User& dl, const User& ul, const IsolationDatabase& db,
                 const LinkBudgetConfig& cfg, const RadioMap& map, double carrier_mhz) {
  const double p_ul = uplink_power(ul, cfg);
  const double s_dl = cfg.bs_tx_power_dbm - pathloss_at(map, dl.position);
  const double i_dl = interference_power(p_ul, dl.position, ul.position, db, carrier_mhz);
  const double s_ul = p_ul - pathloss_at(map, ul.position);
  return inverse_rate_cost(rate_density(sinr_db(s_dl, cfg.noise_dbm, i_dl))) +
         inverse_rate_cost(rate_density(sinr_db(s_ul, cfg.noise_dbm, std::nullopt)));
}

PairCosts build_cost_matrix(const std::vector<User>& users, const IsolationDatabase& db,
                            const LinkBudgetConfig& cfg, const RadioMap& map) {
  const UserIndex idx = index_users(users);
  PairCosts pc;
  pc.cost = CostMatrix(idx.dl.size(), idx.ul.size());
  for (const User* u : idx.dl) pc.dl_ids.push_back(u->id);
  for (const User* u : idx.ul) pc.ul_ids.push_back(u->id);
  const double carrier = cfg.shared_carrier_mhz();
  for (std::size_t r = 0; r < idx.dl.size(); ++r) {
    for (std::size_t c = 0; c < idx.ul.size(); ++c) {
      pc.cost(r, c) = pair_cost(*idx.dl[r], *idx.ul[c], db, cfg, map, carrier);
    }
  }
  return pc;
}

Assignment solve_optimal(const PairCosts& costs, const LinkBudgetConfig& cfg) {
  if (costs.cost.rows() != costs.dl_ids.size() || costs.cost.cols() != costs.ul_ids.size()) {
    throw ContractError("cost matrix shape does not match the user lists");
  }
  const Matching m = solve_matching(costs.cost);
  Assignment a;
  ResourceCounter counter(cfg);
  for (std::size_t r = 0; r < m.row_to_col.size(); ++r) {
    if (m.row_to_col[r] == Matching::kUnmatched) continue;
    a.slots.push_back(counter.full_duplex(costs.dl_ids[r],
                                          costs.ul_ids[static_cast<std::size_t>(m.row_to_col[r])]));
  }
  for (std::size_t r = 0; r < m.row_to_col.size(); ++r) {
    if (m.row_to_col[r] == Matching::kUnmatched) {
      a.slots.push_back(counter.half_duplex(User{costs.dl_ids[r], {}, {}}));
    }
  }
  for (std::size_t c = 0; c < m.col_to_row.size(); ++c) {
    if (m.col_to_row[c] == Matching::kUnmatched) {
      a.slots.push_back(counter.half_duplex(User{costs.ul_ids[c], {}, {}}));
    }
  }
  return a;
}

Assignment schedule_optimal(const std::vector<User>& users, const IsolationDatabase& db,
                            const LinkBudgetConfig& cfg, const RadioMap& map,
                            OptimalOptions options) {
  const PairCosts costs = build_cost_matrix(users, db, cfg, map);
  Assignment a = solve_optimal(costs, cfg);
  if (!options.per_resource_carrier) return a;

  // Second matching: full-duplex pairs x their resources, cost at each
  // resource's own center frequency.
  const UserIndex idx = index_users(users);
  std::vector<std::size_t> fd;
  for (std::size_t i = 0; i < a.slots.size(); ++i) {
    if (a.slots[i].mode == DuplexMode::full_duplex) fd.push_back(i);
  }
  CostMatrix by_resource(fd.size(), fd.size());
  for (std::size_t p = 0; p < fd.size(); ++p) {
    const auto& pair_slot = a.slots[fd[p]];
    for (std::size_t f = 0; f < fd.size(); ++f) {
      by_resource(p, f) = pair_cost(*idx.by_id.at(*pair_slot.dl_user),
                                    *idx.by_id.at(*pair_slot.ul_user), db, cfg, map,
                                    a.slots[fd[f]].resource.center_mhz);
    }
  }
  const Matching m = solve_matching(by_resource);
  std::vector<ResourceSlot> moved(fd.size());
  for (std::size_t p = 0; p < fd.size(); ++p) {
    const std::size_t f = static_cast<std::size_t>(m.row_to_col[p]);
    moved[f] = a.slots[fd[p]];
    moved[f].resource = a.slots[fd[f]].resource;
  }
  for (std::size_t f = 0; f < fd.size(); ++f) a.slots[fd[f]] = moved[f];
  return a;
}

Assignment schedule_fdregrand(const std::vector<User>& users, const IsolationDatabase& db,
                              const LinkBudgetConfig& cfg, Rng& rng) {
  const UserIndex idx = index_users(users);
  require_equal_counts(idx, "FDregrand");
  ResourceCounter counter(cfg);
  StepOne step = region_step(idx, users, db, counter);
  if (step.dl_left.size() != step.ul_left.size()) {
    throw ContractError("FDregrand step 2 has unequal leftover pools");
  }
  std::shuffle(step.dl_left.begin(), step.dl_left.end(), rng);
  std::shuffle(step.ul_left.begin(), step.ul_left.end(), rng);
  Assignment a{std::move(step.slots)};
  for (std::size_t l = 0; l < step.dl_left.size(); ++l) {
    a.slots.push_back(counter.full_duplex(step.dl_left[l]->id, step.ul_left[l]->id));
  }
  return a;
}

Assignment schedule_fdreghdelse(const std::vector<User>& users, const IsolationDatabase& db,
                                const LinkBudgetConfig& cfg, Rng& rng) {
  const UserIndex idx = index_users(users);
  ResourceCounter counter(cfg);
  StepOne step = region_step(idx, users, db, counter);
  const int needed = counter.next() - 1 + static_cast<int>(step.dl_left.size() + step.ul_left.size());
  const int available = 2 * resources_per_band(cfg);
  if (needed > available) {
    throw CapacityError("FDregHDelse needs " + std::to_string(needed) + " resources, " +
                        std::to_string(available) + " available (short by " +
                        std::to_string(needed - available) + ")");
  }
  std::shuffle(step.dl_left.begin(), step.dl_left.end(), rng);
  std::shuffle(step.ul_left.begin(), step.ul_left.end(), rng);
  Assignment a{std::move(step.slots)};
  for (const User* u : step.dl_left) a.slots.push_back(counter.half_duplex(*u));
  for (const User* u : step.ul_left) a.slots.push_back(counter.half_duplex(*u));
  return a;
}

Assignment schedule_fdrand(const std::vector<User>& users, const LinkBudgetConfig& cfg, Rng& rng) {
  UserIndex idx = index_users(users);
  require_equal_counts(idx, "FDrand");
  std::shuffle(idx.ul.begin(), idx.ul.end(), rng);
  ResourceCounter counter(cfg);
  Assignment a;
  for (std::size_t l = 0; l < idx.dl.size(); ++l) {
    a.slots.push_back(counter.full_duplex(idx.dl[l]->id, idx.ul[l]->id));
  }
  return a;
}

Assignment schedule_hd(const std::vector<User>& users, const LinkBudgetConfig& cfg, Rng& rng) {
  UserIndex idx = index_users(users);
  const int per_band = resources_per_band(cfg);
  if (idx.dl.size() > static_cast<std::size_t>(per_band) ||
      idx.ul.size() > static_cast<std::size_t>(per_band)) {
    throw CapacityError("half duplex needs one resource per user in each band (" +
                        std::to_string(per_band) + " per band)");
  }
  std::shuffle(idx.dl.begin(), idx.dl.end(), rng);
  std::shuffle(idx.ul.begin(), idx.ul.end(), rng);
  Assignment a;
  for (std::size_t l = 0; l < idx.dl.size(); ++l) {
    a.slots.push_back({resource_at(cfg, static_cast<int>(l) + 1), DuplexMode::hd_downlink,
                       idx.dl[l]->id, std::nullopt});
  }
  for (std::size_t l = 0; l < idx.ul.size(); ++l) {
    a.slots.push_back({resource_at(cfg, per_band + static_cast<int>(l) + 1),
                       DuplexMode::hd_uplink, std::nullopt, idx.ul[l]->id});
  }
  return a;
}

double assignment_objective(const Assignment& a, const PairCosts& costs) {
  std::unordered_map<int, std::size_t> row, col;
  for (std::size_t i = 0; i < costs.dl_ids.size(); ++i) row[costs.dl_ids[i]] = i;
  for (std::size_t i = 0; i < costs.ul_ids.size(); ++i) col[costs.ul_ids[i]] = i;
  double total = 0.0;
  for (const auto& s : a.slots) {
    if (s.mode != DuplexMode::full_duplex) continue;
    total += costs.cost(row.at(*s.dl_user), col.at(*s.ul_user));
  }
  return total;
}

std::string to_string(DuplexMode mode) {
  switch (mode) {
    case DuplexMode::full_duplex: return "FD";
    case DuplexMode::hd_downlink: return "HD-DL";
    case DuplexMode::hd_uplink: return "HD-UL";
  }
  return "?";
}

std::string to_string(BandId band) {
  return band == BandId::f1_dl_shared ? "f1" : "f2";
}

std::string format_assignment_csv(const Assignment& a) {
  std::ostringstream os;
  os.precision(10);
  os << "resource,band,center_mhz,mode,dl_user,ul_user\n";
  for (const auto& s : a.slots) {
    os << s.resource.index << ',' << to_string(s.resource.band) << ',' << s.resource.center_mhz
       << ',' << to_string(s.mode) << ',';
    if (s.dl_user) os << *s.dl_user;
    os << ',';
    if (s.ul_user) os << *s.ul_user;
    os << '\n';
  }
  return os.str();
}

}  // namespace geofd
