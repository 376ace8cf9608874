// Deterministic discrete-event engine.
//
// Two event kinds exist: a truck arriving at a hub and a truck departing
// from one. Events are processed in the total order (time, kind with
// arrivals first, truck id). An arrival solves the waiting-time problem and
// commits only the current hub's wait (receding horizon); the full predicted
// departure schedule is written to the prediction store for others to align
// with. All departures sharing (hub, next segment, instant) realize a
// platoon and settle immediately; a truck that waited and still departs
// alone gets its waiting loss refunded by the provider.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "platoonsim/coordination.hpp"
#include "platoonsim/network.hpp"
#include "platoonsim/pricing.hpp"
#include "platoonsim/types.hpp"

namespace platoonsim {

enum class EventKind { Arrival = 0, Departure = 1 };

struct Event {
  Seconds time = 0;
  EventKind kind = EventKind::Arrival;
  TruckId truck = -1;
  int hub_index = 0;
};

/// Money and waiting record of one truck over a whole run. SEK / seconds.
struct TruckLedger {
  TruckId truck_id = -1;
  Money platoon_benefit_received = 0;          // sum of p_f over follower legs
  Money fees_paid = 0;                         // sum of f_f
  Money leader_compensation_received = 0;      // sum of r_c over leader legs
  Money waiting_loss = 0;                      // epsilon * wait over all hubs
  Money failed_wait_compensation_received = 0; // lone departures after waiting
  std::vector<Seconds> realized_waits;         // one slot per route leg
  Seconds destination_arrival_s = 0;

  Money net_profit() const {
    return platoon_benefit_received - fees_paid + leader_compensation_received +
           failed_wait_compensation_received - waiting_loss;
  }
};

struct ProviderLedger {
  Money gross_fee_income = 0;  // sum of f_total over settlements
  Money failed_wait_paid = 0;

  // Leader compensation is pass-through and never appears here.
  Money net_profit() const { return gross_fee_income - failed_wait_paid; }
};

/// One realized platoon with its settlement and context.
struct SettlementRecord {
  int platoon_id = -1;
  Edge edge;
  Seconds departure_time = 0;
  PlatoonSettlement settlement;
  bool spontaneous = false;  // every member's wait at this hub was zero
};

struct SimResult {
  std::vector<TruckLedger> trucks;  // same order as Scenario::trucks
  ProviderLedger provider;
  std::vector<SettlementRecord> settlements;
  long long total_edge_traversals = 0;
  long long platooned_traversals = 0;

  long long realized_platoon_count() const {
    return static_cast<long long>(settlements.size());
  }
};

struct RunOptions {
  std::ostream* solver_trace = nullptr;  // one JSON line per solve when set
};

/// Runs the scenario to completion. Identical inputs give byte-identical
/// serialized results. Throws ValidationError on malformed scenarios.
SimResult run(const Scenario& scenario, const PricingParams& params,
              const RunOptions& options = {});

/// Platoon leader: earliest arrival at the hub, ties by smallest id.
TruckId leader_select(const std::vector<std::pair<TruckId, Seconds>>& members_with_arrivals);

// --- run ledger serialization (fixed column order, '\n' line ends) ---

std::string settlements_csv(const SimResult& result);
std::string truck_ledgers_csv(const SimResult& result);
std::string waits_csv(const SimResult& result, const Scenario& scenario);
std::string run_manifest(const Scenario& scenario, const PricingParams& params);

/// Writes settlements.csv, truck_ledgers.csv, waits.csv and manifest.txt.
void write_run_ledgers(const SimResult& result, const Scenario& scenario,
                       const PricingParams& params, const std::filesystem::path& dir);

}  // namespace platoonsim
