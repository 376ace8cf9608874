// Hub graph, routes, trucks and scenario generation/loading.
//
// A RoadNetwork is a directed graph of hubs with one travel time per ordered
// hub pair. Truck speed is folded into the segment travel times when a
// network is generated; nothing downstream ever sees distances. All model
// invariants are enforced at construction time, and every type here is
// immutable once built, so scenarios can be shared freely across runs.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "platoonsim/types.hpp"

namespace platoonsim {

struct Hub {
  HubId id = -1;
  std::string label;  // optional, empty means unnamed
};

struct RoadSegment {
  HubId from = -1;
  HubId to = -1;
  Seconds travel_time_s = 0;  // strictly positive
};

class RoadNetwork {
 public:
  /// Throws ValidationError on negative or duplicate id.
  void add_hub(HubId id, std::string label = {});
  /// Throws ValidationError on dangling endpoint, self loop, duplicate
  /// ordered pair, or non-positive travel time.
  void add_segment(HubId from, HubId to, Seconds travel_time_s);

  bool has_hub(HubId id) const { return hubs_.count(id) != 0; }
  bool has_segment(HubId from, HubId to) const;
  /// Throws ValidationError if the segment does not exist.
  Seconds travel_time(HubId from, HubId to) const;

  std::size_t hub_count() const { return hubs_.size(); }
  std::size_t segment_count() const { return segment_count_; }

  const std::map<HubId, std::string>& hubs() const { return hubs_; }
  /// Outgoing adjacency of one hub, keyed by target id (sorted).
  const std::map<HubId, Seconds>& out(HubId from) const;

  std::vector<RoadSegment> segments() const;  // sorted by (from, to)

 private:
  std::map<HubId, std::string> hubs_;
  std::map<HubId, std::map<HubId, Seconds>> out_;
  std::size_t segment_count_ = 0;
};

/// Ordered hub sequence, length >= 2, every consecutive pair a segment of
/// the network, no repeated hub.
struct Route {
  std::vector<HubId> hubs;

  int hub_count() const { return static_cast<int>(hubs.size()); }
  int leg_count() const { return static_cast<int>(hubs.size()) - 1; }
  HubId hub_at(int index) const { return hubs.at(index); }
  Edge edge_at(int index) const { return Edge{hubs.at(index), hubs.at(index + 1)}; }
};

struct Truck {
  TruckId id = -1;
  Route route;
  Seconds start_time_s = 0;
  Seconds deadline_s = 0;
  double xi_sek_per_s = 0;       // platooning benefit rate per follower
  double epsilon_sek_per_s = 0;  // waiting loss rate

  /// Travel time of route legs [first_leg, leg_count), with no waiting.
  Seconds free_flow_from(const RoadNetwork& net, int first_leg) const;
};

struct Scenario {
  RoadNetwork network;
  std::vector<Truck> trucks;
  std::uint64_t seed = 0;
};

/// Throws ValidationError naming the first violated invariant.
void validate_route(const RoadNetwork& net, const Route& route);
void validate_scenario(const Scenario& scenario);

Seconds route_travel_time(const RoadNetwork& net, const Route& route);

/// Minimal-travel-time simple path; ties broken by lexicographically
/// smallest hub-id sequence. Throws ValidationError when origin equals
/// destination, a hub is unknown, or the destination is unreachable.
Route shortest_route(const RoadNetwork& net, HubId origin, HubId destination);

struct NetworkGenParams {
  int n_hubs = 84;
  double connectivity = 3.0;  // average out-degree
  Seconds travel_time_min_s = 1800;
  Seconds travel_time_max_s = 7200;
  std::uint64_t seed = 0;
};

/// Strongly connected random graph: a random Hamiltonian cycle plus random
/// extra segments up to round(n_hubs * connectivity) segments in total,
/// travel times uniform over the given range. Deterministic per seed.
RoadNetwork generate_network(const NetworkGenParams& params);

struct ScenarioGenParams {
  int n_trucks = 100;
  Seconds start_window_begin_s = 8 * 3600;
  Seconds start_window_end_s = 12 * 3600;
  double waiting_budget_fraction = 0.10;
  double xi_sek_per_s = 57.5 / 3600.0;
  double epsilon_sek_per_s = 260.0 / 3600.0;
  Seconds max_trip_duration_s = 9 * 3600;
  std::uint64_t seed = 0;
  int redraw_limit = 1000;  // per truck
};

/// Each truck: uniform OD pair (origin != destination, reachable), route =
/// shortest_route, start uniform over the window, and
/// deadline = start + floor((1 + fraction) * free_flow). Trucks whose
/// free-flow trip exceeds max_trip_duration_s are redrawn. Deterministic
/// per (network, params).
Scenario generate_scenario(const RoadNetwork& net, const ScenarioGenParams& params);

/// Whole-second deadline slack shared by the generator and its tests.
Seconds deadline_for(Seconds start_time_s, double waiting_budget_fraction, Seconds free_flow_s);

// --- file formats (JSON, format_version = 1, lossless round-trip) ---

RoadNetwork load_network(const std::filesystem::path& path);
void save_network(const RoadNetwork& net, const std::filesystem::path& path);
/// Canonical serialization; hashing this gives the network content hash.
std::string network_to_json(const RoadNetwork& net);

/// Scenario files reference their network by path (resolved relative to the
/// scenario file) and pin it with a content hash, checked on load.
Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path,
                   const std::string& network_file_ref);
std::string scenario_to_json(const Scenario& scenario, const std::string& network_file_ref);

std::string scenario_content_hash(const Scenario& scenario);

}  // namespace platoonsim
