// Provider-side predictive optimizer.
//
// The provider keeps one predicted departure per (truck, hub). When truck i
// reaches hub k of its route at time t, it picks waiting times for all its
// remaining hubs to maximize
//
//     J_i(k) = sum over remaining legs of (1-alpha)*xi_i*c*(n-1)/n
//            - sum over remaining hubs of epsilon_i * w
//
// where n counts the trucks predicted to leave the same hub onto the same
// segment at exactly the same second, and the induced arrivals must respect
// the trip deadline.
//
// The decision space is finite without loss of optimality: between two
// alignment points the reward term is constant while the waiting loss grows
// linearly, so at each hub an optimal departure is either "immediately on
// arrival" or exactly some other truck's predicted departure onto the same
// segment (waiting past the last alignment point only adds loss). The solver
// therefore enumerates those candidates per hub and runs an exact backward
// recursion memoized on (hub index, arrival time). Among equal-utility plans
// it returns the lexicographically smallest wait vector.

#pragma once

#include <cstddef>
#include <vector>

#include "platoonsim/network.hpp"
#include "platoonsim/pricing.hpp"
#include "platoonsim/types.hpp"

namespace platoonsim {

/// One predicted (or already realized) hub departure of one truck.
struct DeparturePrediction {
  TruckId truck_id = -1;
  HubId hub_id = -1;
  Edge next_edge;              // segment traversed right after hub_id
  Seconds departure_time = 0;  // epoch seconds
};

/// Provider-side belief state: exactly one entry per (truck, remaining hub);
/// entries of traversed hubs stay frozen at the realized departure times.
class PredictionStore {
 public:
  /// Insert or replace the entry for (prediction.truck_id, prediction.hub_id).
  void set(const DeparturePrediction& prediction);

  /// nullptr when the truck has no entry at this hub.
  const DeparturePrediction* find(TruckId truck, HubId hub) const;

  /// All entries at one hub, keyed by truck id (empty map if none).
  const std::map<TruckId, DeparturePrediction>& at_hub(HubId hub) const;

  std::size_t size() const { return size_; }

 private:
  std::map<HubId, std::map<TruckId, DeparturePrediction>> by_hub_;
  std::size_t size_ = 0;
};

/// Trucks predicted to leave the hub at route position `hub_index` of
/// `truck` onto the truck's next segment exactly at `candidate_departure`,
/// including the truck itself. Sorted by id; the size is the platoon size n.
std::vector<TruckId> partner_set(const Truck& truck, int hub_index,
                                 Seconds candidate_departure, const PredictionStore& store);

/// Per-leg benefit net of the provider share, split evenly over the platoon:
/// (1 - alpha) * xi * travel_time * (n - 1) / n. Zero for n = 1.
Money edge_reward(double xi_sek_per_s, double alpha, Seconds edge_travel_time, int platoon_size);

/// Utility of the wait vector `waits` (one entry per remaining hub,
/// positions hub_index .. last-but-one) for a truck arriving at
/// `hub_index` at `arrival`. Throws ValidationError when the induced
/// destination arrival misses the deadline or the vector has waits < 0 or
/// the wrong length.
Money utility(const RoadNetwork& net, const Truck& truck, int hub_index, Seconds arrival,
              const std::vector<Seconds>& waits, const PredictionStore& store,
              const PricingParams& params);

/// Departure instants worth considering at one hub: the arrival itself plus
/// every other truck's predicted departure onto the truck's next segment
/// that is later than the arrival and still leaves the rest of the trip
/// finishable by `deadline`. Sorted ascending.
std::vector<Seconds> candidate_departures(const RoadNetwork& net, const Truck& truck,
                                          int hub_index, Seconds arrival,
                                          const PredictionStore& store, Seconds deadline);

/// Optimized waiting times for all remaining hubs, solved at one hub.
struct WaitingPlan {
  TruckId truck_id = -1;
  int solved_at_hub_index = 0;
  std::vector<Seconds> waits;               // positions [k, last-1]
  std::vector<Seconds> predicted_arrivals;  // positions [k, last]
  Money predicted_utility = 0;

  Seconds departure_at(int hub_index) const {
    const int offset = hub_index - solved_at_hub_index;
    return predicted_arrivals.at(offset) + waits.at(offset);
  }
};

/// Per-solve diagnostics, filled only when requested.
struct SolveTrace {
  struct HubCandidates {
    int hub_index = 0;
    Seconds arrival = 0;
    std::vector<Seconds> candidates;
  };
  std::vector<HubCandidates> per_hub;  // along the returned plan
  std::size_t dp_states = 0;
};

/// Exact maximizer of the utility over the finite candidate grid (and so
/// over all feasible nonnegative wait vectors). Ties resolve to the
/// lexicographically smallest wait vector. Throws ValidationError when even
/// zero waiting cannot meet the deadline.
WaitingPlan solve_waiting_plan(const RoadNetwork& net, const Truck& truck, int hub_index,
                               Seconds arrival, const PredictionStore& store,
                               const PricingParams& params, SolveTrace* trace = nullptr);

}  // namespace platoonsim
