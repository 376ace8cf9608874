#include "platoonsim/coordination.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

namespace platoonsim {

void PredictionStore::set(const DeparturePrediction& prediction) {
  auto& slot = by_hub_[prediction.hub_id][prediction.truck_id];
  if (slot.truck_id < 0) ++size_;
  slot = prediction;
}

const DeparturePrediction* PredictionStore::find(TruckId truck, HubId hub) const {
  auto it = by_hub_.find(hub);
  if (it == by_hub_.end()) return nullptr;
  auto jt = it->second.find(truck);
  return jt == it->second.end() ? nullptr : &jt->second;
}

const std::map<TruckId, DeparturePrediction>& PredictionStore::at_hub(HubId hub) const {
  static const std::map<TruckId, DeparturePrediction> empty;
  auto it = by_hub_.find(hub);
  return it == by_hub_.end() ? empty : it->second;
}

std::vector<TruckId> partner_set(const Truck& truck, int hub_index,
                                 Seconds candidate_departure, const PredictionStore& store) {
  const HubId hub = truck.route.hub_at(hub_index);
  const Edge edge = truck.route.edge_at(hub_index);
  std::vector<TruckId> members{truck.id};
  for (const auto& [id, prediction] : store.at_hub(hub)) {
    if (id == truck.id) continue;
    if (prediction.next_edge == edge && prediction.departure_time == candidate_departure)
      members.push_back(id);
  }
  std::sort(members.begin(), members.end());
  return members;
}

Money edge_reward(double xi_sek_per_s, double alpha, Seconds edge_travel_time, int platoon_size) {
  if (platoon_size < 1) throw std::invalid_argument("edge_reward: platoon size must be >= 1");
  if (platoon_size == 1) return 0.0;
  return (1.0 - alpha) * xi_sek_per_s * static_cast<double>(edge_travel_time) *
         (static_cast<double>(platoon_size - 1) / static_cast<double>(platoon_size));
}

namespace {

// Platoon size at one departure instant, without building the member list.
int partner_count(const Truck& truck, const PredictionStore& store, HubId hub, const Edge& edge,
                  Seconds departure) {
  int n = 1;
  for (const auto& [id, prediction] : store.at_hub(hub)) {
    if (id == truck.id) continue;
    if (prediction.next_edge == edge && prediction.departure_time == departure) ++n;
  }
  return n;
}

}  // namespace

Money utility(const RoadNetwork& net, const Truck& truck, int hub_index, Seconds arrival,
              const std::vector<Seconds>& waits, const PredictionStore& store,
              const PricingParams& params) {
  const int legs = truck.route.leg_count();
  const int remaining = legs - hub_index;
  if (hub_index < 0 || hub_index >= legs)
    throw ValidationError("utility: hub index " + std::to_string(hub_index) + " out of range");
  if (static_cast<int>(waits.size()) != remaining)
    throw ValidationError("utility: expected " + std::to_string(remaining) + " waits, got " +
                          std::to_string(waits.size()));
  Money reward = 0;
  Seconds total_wait = 0;
  Seconds at = arrival;
  for (int leg = hub_index; leg < legs; ++leg) {
    const Seconds w = waits[leg - hub_index];
    if (w < 0) throw ValidationError("utility: negative wait at hub index " + std::to_string(leg));
    const Seconds departure = at + w;
    const Edge edge = truck.route.edge_at(leg);
    const Seconds travel = net.travel_time(edge.from, edge.to);
    const int n = partner_count(truck, store, edge.from, edge, departure);
    reward += edge_reward(truck.xi_sek_per_s, params.alpha, travel, n);
    total_wait += w;
    at = departure + travel;
  }
  if (at > truck.deadline_s)
    throw ValidationError("utility: waits arrive at destination at " + std::to_string(at) +
                          ", after deadline " + std::to_string(truck.deadline_s));
  // Waiting is priced on the exact total; plans that trade the same waiting
  // between hubs therefore tie exactly, as they do in real arithmetic.
  return reward - truck.epsilon_sek_per_s * static_cast<double>(total_wait);
}

std::vector<Seconds> candidate_departures(const RoadNetwork& net, const Truck& truck,
                                          int hub_index, Seconds arrival,
                                          const PredictionStore& store, Seconds deadline) {
  const HubId hub = truck.route.hub_at(hub_index);
  const Edge edge = truck.route.edge_at(hub_index);
  Seconds tail = 0;  // free-flow time of the remaining trip, this leg included
  for (int leg = hub_index; leg < truck.route.leg_count(); ++leg) {
    const Edge e = truck.route.edge_at(leg);
    tail += net.travel_time(e.from, e.to);
  }
  std::vector<Seconds> times{arrival};
  for (const auto& [id, prediction] : store.at_hub(hub)) {
    if (id == truck.id) continue;
    if (prediction.next_edge != edge) continue;
    const Seconds d = prediction.departure_time;
    if (d > arrival && d + tail <= deadline) times.push_back(d);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

WaitingPlan solve_waiting_plan(const RoadNetwork& net, const Truck& truck, int hub_index,
                               Seconds arrival, const PredictionStore& store,
                               const PricingParams& params, SolveTrace* trace) {
  const int legs = truck.route.leg_count();
  if (hub_index < 0 || hub_index >= legs)
    throw ValidationError("solve_waiting_plan: hub index " + std::to_string(hub_index) +
                          " out of range");

  // Leg travel times and free-flow tails, tail[p] = sum of legs p..end.
  std::vector<Seconds> leg_time(legs);
  for (int leg = hub_index; leg < legs; ++leg) {
    const Edge e = truck.route.edge_at(leg);
    leg_time[leg] = net.travel_time(e.from, e.to);
  }
  std::vector<Seconds> tail(legs + 1, 0);
  for (int leg = legs - 1; leg >= hub_index; --leg) tail[leg] = leg_time[leg] + tail[leg + 1];

  if (arrival + tail[hub_index] > truck.deadline_s)
    throw ValidationError("solve_waiting_plan: truck " + std::to_string(truck.id) +
                          " cannot reach its destination by " + std::to_string(truck.deadline_s) +
                          " even with zero waiting from hub index " + std::to_string(hub_index));

  // Backward recursion over (position, arrival). Feasibility is invariant:
  // every candidate keeps d + tail <= deadline, and departing on arrival is
  // always allowed, so each state has at least one choice.
  //
  // The value is carried as (reward sum, waited seconds) and only collapsed
  // to reward - epsilon*waited when two candidates are compared. Plans that
  // shift the same total waiting between hubs then compare exactly equal,
  // as they do in real arithmetic, and the tie goes to the earlier
  // departure; candidates ascend, so the reconstructed wait vector is the
  // lexicographically smallest maximizer.
  struct Entry {
    Money reward_sum = 0;
    Seconds wait_sum = 0;
    Seconds best_departure = 0;
  };
  std::map<std::pair<int, Seconds>, Entry> memo;
  auto scalar = [&](const Entry& e) {
    return e.reward_sum - truck.epsilon_sek_per_s * static_cast<double>(e.wait_sum);
  };

  auto value_of = [&](auto&& self, int pos, Seconds at) -> Entry {
    if (pos == legs) return Entry{};
    const auto found = memo.find({pos, at});
    if (found != memo.end()) return found->second;
    const HubId hub = truck.route.hub_at(pos);
    const Edge edge = truck.route.edge_at(pos);
    Entry entry;
    bool first = true;
    for (const Seconds d : candidate_departures(net, truck, pos, at, store, truck.deadline_s)) {
      const int n = partner_count(truck, store, hub, edge, d);
      const Entry rest = self(self, pos + 1, d + leg_time[pos]);
      Entry candidate;
      candidate.reward_sum =
          edge_reward(truck.xi_sek_per_s, params.alpha, leg_time[pos], n) + rest.reward_sum;
      candidate.wait_sum = (d - at) + rest.wait_sum;
      candidate.best_departure = d;
      if (first || scalar(candidate) > scalar(entry)) {
        entry = candidate;
        first = false;
      }
    }
    memo.emplace(std::pair{pos, at}, entry);
    return entry;
  };

  WaitingPlan plan;
  plan.truck_id = truck.id;
  plan.solved_at_hub_index = hub_index;
  plan.predicted_utility = scalar(value_of(value_of, hub_index, arrival));

  // Forward reconstruction of the argmax path.
  Seconds at = arrival;
  for (int pos = hub_index; pos < legs; ++pos) {
    const Entry& entry = memo.at({pos, at});
    plan.predicted_arrivals.push_back(at);
    plan.waits.push_back(entry.best_departure - at);
    if (trace) {
      trace->per_hub.push_back(SolveTrace::HubCandidates{
          pos, at, candidate_departures(net, truck, pos, at, store, truck.deadline_s)});
    }
    at = entry.best_departure + leg_time[pos];
  }
  plan.predicted_arrivals.push_back(at);  // destination
  if (trace) trace->dp_states = memo.size();
  return plan;
}

}  // namespace platoonsim
