#include "platoonsim/sim.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>

#include <json.hpp>

namespace platoonsim {

TruckId leader_select(const std::vector<std::pair<TruckId, Seconds>>& members_with_arrivals) {
  if (members_with_arrivals.size() < 2)
    throw std::invalid_argument("leader_select: need at least 2 members");
  auto best = members_with_arrivals.front();
  for (const auto& m : members_with_arrivals) {
    if (m.second < best.second || (m.second == best.second && m.first < best.first)) best = m;
  }
  return best.first;
}

namespace {

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.kind != b.kind) return static_cast<int>(a.kind) > static_cast<int>(b.kind);
    return a.truck > b.truck;
  }
};

class Engine {
 public:
  Engine(const Scenario& scenario, const PricingParams& params, const RunOptions& options)
      : scenario_(scenario), params_(params), options_(options) {
    validate_scenario(scenario_);
    const std::size_t m = scenario_.trucks.size();
    result_.trucks.resize(m);
    truck_pos_.resize(m, 0);
    truck_arrival_.resize(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
      const Truck& t = scenario_.trucks[i];
      index_by_id_[t.id] = i;
      result_.trucks[i].truck_id = t.id;
      result_.trucks[i].realized_waits.assign(t.route.leg_count(), 0);
      result_.total_edge_traversals += t.route.leg_count();
    }
    init_prediction_store();
    for (const Truck& t : scenario_.trucks)
      queue_.push(Event{t.start_time_s, EventKind::Arrival, t.id, 0});
  }

  SimResult run_to_completion() {
    while (!queue_.empty()) {
      const Event head = queue_.top();
      if (head.kind == EventKind::Arrival) {
        queue_.pop();
        on_arrival(head.truck, head.hub_index, head.time);
      } else {
        // Collect every departure at this instant. No arrival at this time
        // can remain (arrivals sort first), and departures only schedule
        // strictly later events, so the batch is complete.
        std::vector<Event> batch;
        while (!queue_.empty() && queue_.top().time == head.time &&
               queue_.top().kind == EventKind::Departure) {
          batch.push_back(queue_.top());
          queue_.pop();
        }
        std::map<HubId, std::vector<Event>> by_hub;
        for (const Event& e : batch)
          by_hub[scenario_.trucks[index_of(e.truck)].route.hub_at(e.hub_index)].push_back(e);
        for (const auto& [hub, events] : by_hub) on_departure_batch(hub, head.time, events);
      }
    }
    return std::move(result_);
  }

 private:
  std::size_t index_of(TruckId id) const { return index_by_id_.at(id); }

  // Provider prior before any solve: zero-waiting departures from every hub.
  void init_prediction_store() {
    for (const Truck& t : scenario_.trucks) {
      Seconds at = t.start_time_s;
      for (int leg = 0; leg < t.route.leg_count(); ++leg) {
        const Edge edge = t.route.edge_at(leg);
        store_.set(DeparturePrediction{t.id, edge.from, edge, at});
        at += scenario_.network.travel_time(edge.from, edge.to);
      }
    }
  }

  void on_arrival(TruckId id, int hub_index, Seconds time) {
    const std::size_t idx = index_of(id);
    const Truck& truck = scenario_.trucks[idx];
    truck_pos_[idx] = hub_index;
    truck_arrival_[idx] = time;
    if (hub_index == truck.route.leg_count()) {  // destination, close the trip
      result_.trucks[idx].destination_arrival_s = time;
      if (time > truck.deadline_s)
        throw std::logic_error("truck " + std::to_string(id) + " missed its deadline");
      return;
    }
    SolveTrace trace;
    WaitingPlan plan = solve_waiting_plan(scenario_.network, truck, hub_index, time, store_,
                                          params_, options_.solver_trace ? &trace : nullptr);
    if (options_.solver_trace) emit_trace(truck, plan, trace);
    // Receding horizon: only the current hub's wait is binding.
    const Seconds committed_wait = plan.waits.front();
    queue_.push(Event{time + committed_wait, EventKind::Departure, id, hub_index});
    // Publish the full predicted departure schedule; the entry for the
    // current hub is already the committed (realized-in-advance) departure.
    for (int leg = hub_index; leg < truck.route.leg_count(); ++leg) {
      store_.set(DeparturePrediction{id, truck.route.hub_at(leg), truck.route.edge_at(leg),
                                     plan.departure_at(leg)});
    }
  }

  void on_departure_batch(HubId hub, Seconds time, const std::vector<Event>& events) {
    // Group the departures by next segment; each group is one platoon.
    std::map<Edge, std::vector<TruckId>> by_edge;
    for (const Event& e : events) {
      const Truck& t = scenario_.trucks[index_of(e.truck)];
      const Edge edge = t.route.edge_at(e.hub_index);
      if (edge.from != hub) throw std::logic_error("departure batch grouped across hubs");
      by_edge[edge].push_back(e.truck);
    }
    for (auto& [edge, members] : by_edge) {
      std::sort(members.begin(), members.end());
      // Realized waits and waiting loss accrue for every member.
      bool all_zero_wait = true;
      for (const TruckId id : members) {
        const std::size_t idx = index_of(id);
        const Truck& t = scenario_.trucks[idx];
        const Seconds wait = time - truck_arrival_[idx];
        result_.trucks[idx].realized_waits[truck_pos_[idx]] = wait;
        result_.trucks[idx].waiting_loss += t.epsilon_sek_per_s * static_cast<double>(wait);
        if (wait != 0) all_zero_wait = false;
      }
      if (members.size() >= 2) {
        settle_platoon(edge, time, members, all_zero_wait);
      } else {
        const std::size_t idx = index_of(members.front());
        const Seconds wait = time - truck_arrival_[idx];
        if (wait > 0) {
          // The suggested wait formed no platoon; the provider covers it.
          const Money compensation =
              scenario_.trucks[idx].epsilon_sek_per_s * static_cast<double>(wait);
          result_.trucks[idx].failed_wait_compensation_received += compensation;
          result_.provider.failed_wait_paid += compensation;
        }
      }
      const Seconds travel = scenario_.network.travel_time(edge.from, edge.to);
      for (const TruckId id : members) {
        const std::size_t idx = index_of(id);
        queue_.push(Event{time + travel, EventKind::Arrival, id, truck_pos_[idx] + 1});
      }
    }
  }

  void settle_platoon(const Edge& edge, Seconds time, const std::vector<TruckId>& members,
                      bool spontaneous) {
    std::vector<std::pair<TruckId, Seconds>> with_arrivals;
    with_arrivals.reserve(members.size());
    for (const TruckId id : members)
      with_arrivals.emplace_back(id, truck_arrival_[index_of(id)]);
    const TruckId leader = leader_select(with_arrivals);
    std::vector<TruckId> followers;
    followers.reserve(members.size() - 1);
    double xi_sum = 0;
    for (const TruckId id : members) {
      if (id == leader) continue;
      followers.push_back(id);
      xi_sum += scenario_.trucks[index_of(id)].xi_sek_per_s;
    }
    // Benefit rates are uniform in generated scenarios; the followers' mean
    // keeps the settlement well-defined if a hand-built scenario mixes them.
    const double xi = xi_sum / static_cast<double>(followers.size());
    const Seconds travel = scenario_.network.travel_time(edge.from, edge.to);
    const Money p_f = per_follower_benefit(xi, travel);
    const int n = static_cast<int>(members.size());
    PlatoonSettlement settlement = settle(n, p_f, params_, leader, followers);

    for (const TruckId id : followers) {
      TruckLedger& ledger = result_.trucks[index_of(id)];
      ledger.platoon_benefit_received += p_f;
      ledger.fees_paid += settlement.f_f;
    }
    result_.trucks[index_of(leader)].leader_compensation_received += settlement.r_c;
    result_.provider.gross_fee_income += settlement.f_total;
    result_.platooned_traversals += n;

    SettlementRecord record;
    record.platoon_id = next_platoon_id_++;
    record.edge = edge;
    record.departure_time = time;
    record.settlement = std::move(settlement);
    record.spontaneous = spontaneous;
    result_.settlements.push_back(std::move(record));
  }

  void emit_trace(const Truck& truck, const WaitingPlan& plan, const SolveTrace& trace) {
    nlohmann::json line;
    line["truck"] = truck.id;
    line["hub_index"] = plan.solved_at_hub_index;
    line["arrival"] = plan.predicted_arrivals.front();
    nlohmann::json hubs = nlohmann::json::array();
    for (const auto& h : trace.per_hub)
      hubs.push_back({{"hub_index", h.hub_index}, {"arrival", h.arrival}, {"candidates", h.candidates}});
    line["candidates_per_hub"] = std::move(hubs);
    line["dp_states"] = trace.dp_states;
    line["waits"] = plan.waits;
    line["utility"] = plan.predicted_utility;
    *options_.solver_trace << line.dump() << "\n";
  }

  const Scenario& scenario_;
  PricingParams params_;
  RunOptions options_;
  std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
  PredictionStore store_;
  std::map<TruckId, std::size_t> index_by_id_;
  std::vector<int> truck_pos_;          // current route position per truck
  std::vector<Seconds> truck_arrival_;  // arrival time at the current hub
  SimResult result_;
  int next_platoon_id_ = 0;
};

}  // namespace

SimResult run(const Scenario& scenario, const PricingParams& params, const RunOptions& options) {
  return Engine(scenario, params, options).run_to_completion();
}

// --- serialization ---

std::string settlements_csv(const SimResult& result) {
  std::ostringstream out;
  out << "platoon_id,from_hub,to_hub,departure_time_s,n,leader_id,follower_ids,"
         "p_f_sek,f_f_sek,r_f_sek,r_c_sek,f_total_sek,spontaneous\n";
  for (const SettlementRecord& r : result.settlements) {
    out << r.platoon_id << ',' << r.edge.from << ',' << r.edge.to << ',' << r.departure_time
        << ',' << r.settlement.n << ',' << r.settlement.leader_id << ',';
    for (std::size_t i = 0; i < r.settlement.follower_ids.size(); ++i) {
      if (i) out << ';';
      out << r.settlement.follower_ids[i];
    }
    out << ',' << format_money(r.settlement.p_f) << ',' << format_money(r.settlement.f_f) << ','
        << format_money(r.settlement.r_f) << ',' << format_money(r.settlement.r_c) << ','
        << format_money(r.settlement.f_total) << ',' << (r.spontaneous ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string truck_ledgers_csv(const SimResult& result) {
  std::ostringstream out;
  out << "truck_id,platoon_benefit_sek,fees_paid_sek,leader_compensation_sek,"
         "waiting_loss_sek,failed_wait_compensation_sek,net_profit_sek,"
         "total_wait_s,destination_arrival_s\n";
  for (const TruckLedger& t : result.trucks) {
    Seconds total_wait = 0;
    for (const Seconds w : t.realized_waits) total_wait += w;
    out << t.truck_id << ',' << format_money(t.platoon_benefit_received) << ','
        << format_money(t.fees_paid) << ',' << format_money(t.leader_compensation_received) << ','
        << format_money(t.waiting_loss) << ',' << format_money(t.failed_wait_compensation_received)
        << ',' << format_money(t.net_profit()) << ',' << total_wait << ','
        << t.destination_arrival_s << '\n';
  }
  return out.str();
}

std::string waits_csv(const SimResult& result, const Scenario& scenario) {
  std::ostringstream out;
  out << "truck_id,hub_index,hub_id,wait_s\n";
  for (std::size_t i = 0; i < result.trucks.size(); ++i) {
    const TruckLedger& ledger = result.trucks[i];
    const Truck& truck = scenario.trucks[i];
    for (std::size_t leg = 0; leg < ledger.realized_waits.size(); ++leg) {
      out << ledger.truck_id << ',' << leg << ',' << truck.route.hub_at(static_cast<int>(leg))
          << ',' << ledger.realized_waits[leg] << '\n';
    }
  }
  return out.str();
}

std::string run_manifest(const Scenario& scenario, const PricingParams& params) {
  std::ostringstream out;
  out << "format_version = " << kFormatVersion << "\n"
      << "scenario_hash = " << scenario_content_hash(scenario) << "\n"
      << "alpha = " << format_ratio(params.alpha) << "\n"
      << "seed = " << scenario.seed << "\n"
      << "n_trucks = " << scenario.trucks.size() << "\n";
  return out.str();
}

void write_run_ledgers(const SimResult& result, const Scenario& scenario,
                       const PricingParams& params, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, const std::string& content) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw ParseError("cannot write " + (dir / name).string());
    out << content;
  };
  write("settlements.csv", settlements_csv(result));
  write("truck_ledgers.csv", truck_ledgers_csv(result));
  write("waits.csv", waits_csv(result, scenario));
  write("manifest.txt", run_manifest(scenario, params));
}

}  // namespace platoonsim
