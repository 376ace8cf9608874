#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <set>

#include "platoonsim/network.hpp"
#include "test_helpers.hpp"

using namespace platoonsim;
using namespace platoonsim::test;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "platoonsim_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// Every hub reaches every other hub, both directions.
bool strongly_connected(const RoadNetwork& net) {
  std::map<HubId, std::set<HubId>> reverse;
  for (const RoadSegment& s : net.segments()) reverse[s.to].insert(s.from);
  for (const bool forward : {true, false}) {
    std::set<HubId> seen{net.hubs().begin()->first};
    std::vector<HubId> stack{net.hubs().begin()->first};
    while (!stack.empty()) {
      const HubId here = stack.back();
      stack.pop_back();
      if (forward) {
        for (const auto& [next, c] : net.out(here))
          if (seen.insert(next).second) stack.push_back(next);
      } else {
        for (const HubId next : reverse[here])
          if (seen.insert(next).second) stack.push_back(next);
      }
    }
    if (seen.size() != net.hub_count()) return false;
  }
  return true;
}

// All simple paths by depth-first enumeration; the oracle for shortest_route.
void enumerate_paths(const RoadNetwork& net, HubId here, HubId destination,
                     std::vector<HubId>& path, std::set<HubId>& visited, Seconds cost,
                     Seconds& best_cost, std::vector<HubId>& best_path) {
  if (here == destination) {
    if (cost < best_cost || (cost == best_cost && path < best_path)) {
      best_cost = cost;
      best_path = path;
    }
    return;
  }
  for (const auto& [next, c] : net.out(here)) {
    if (visited.count(next)) continue;
    visited.insert(next);
    path.push_back(next);
    enumerate_paths(net, next, destination, path, visited, cost + c, best_cost, best_path);
    path.pop_back();
    visited.erase(next);
  }
}

}  // namespace

TEST_CASE("load_network parses a minimal file") {
  const auto path = temp_file("minimal_net.json");
  write_text(path, R"({"format_version": 1,
    "hubs": [{"id": 0}, {"id": 1, "label": "north"}],
    "segments": [{"from": 0, "to": 1, "travel_time_s": 3600}]})");
  const RoadNetwork net = load_network(path);
  CHECK(net.hub_count() == 2);
  CHECK(net.segment_count() == 1);
  CHECK(net.travel_time(0, 1) == 3600);
  CHECK(net.hubs().at(1) == "north");
}

TEST_CASE("load_network rejects invalid records by name") {
  const auto dangling = temp_file("dangling_net.json");
  write_text(dangling, R"({"format_version": 1,
    "hubs": [{"id": 0}, {"id": 1}],
    "segments": [{"from": 0, "to": 99, "travel_time_s": 60}]})");
  CHECK_THROWS_WITH_AS(load_network(dangling), doctest::Contains("99"), ValidationError);

  const auto zero_time = temp_file("zero_time_net.json");
  write_text(zero_time, R"({"format_version": 1,
    "hubs": [{"id": 0}, {"id": 1}],
    "segments": [{"from": 0, "to": 1, "travel_time_s": 0}]})");
  CHECK_THROWS_AS(load_network(zero_time), ValidationError);

  const auto garbage = temp_file("garbage_net.json");
  write_text(garbage, "{nope");
  CHECK_THROWS_AS(load_network(garbage), ParseError);

  CHECK_THROWS_AS(load_network(temp_file("missing_net.json")), ParseError);
}

TEST_CASE("network file round-trip is lossless") {
  NetworkGenParams params;
  params.n_hubs = 12;
  params.connectivity = 2.5;
  params.seed = 5;
  const RoadNetwork net = generate_network(params);
  const auto path = temp_file("roundtrip_net.json");
  save_network(net, path);
  const RoadNetwork reloaded = load_network(path);
  CHECK(network_to_json(net) == network_to_json(reloaded));
}

TEST_CASE("generate_network basics") {
  NetworkGenParams params;
  params.n_hubs = 84;
  params.connectivity = 3.0;
  params.travel_time_min_s = 1800;
  params.travel_time_max_s = 14400;
  params.seed = 7;
  const RoadNetwork net = generate_network(params);
  CHECK(net.hub_count() == 84);
  CHECK(net.segment_count() == 252);
  CHECK(strongly_connected(net));
  for (const RoadSegment& s : net.segments()) {
    CHECK(s.travel_time_s >= params.travel_time_min_s);
    CHECK(s.travel_time_s <= params.travel_time_max_s);
  }

  // byte-identical regeneration, different seed differs
  CHECK(network_to_json(net) == network_to_json(generate_network(params)));
  NetworkGenParams other = params;
  other.seed = 8;
  CHECK(network_to_json(net) != network_to_json(generate_network(other)));
}

TEST_CASE("generate_network two-hub edge case and parameter errors") {
  NetworkGenParams params;
  params.n_hubs = 2;
  params.connectivity = 1.0;
  params.travel_time_min_s = 60;
  params.travel_time_max_s = 60;
  params.seed = 0;
  const RoadNetwork net = generate_network(params);
  CHECK(net.travel_time(0, 1) == 60);
  CHECK(net.travel_time(1, 0) == 60);

  NetworkGenParams too_dense = params;
  too_dense.connectivity = 2.0;  // 2 hubs cannot carry out-degree 2
  CHECK_THROWS_AS(generate_network(too_dense), ValidationError);
  NetworkGenParams too_small = params;
  too_small.n_hubs = 1;
  CHECK_THROWS_AS(generate_network(too_small), ValidationError);
}

TEST_CASE("shortest_route on a line and its error cases") {
  RoadNetwork net;
  for (HubId id : {0, 1, 2, 3}) net.add_hub(id);
  net.add_segment(0, 1, 100);
  net.add_segment(1, 2, 100);
  const Route route = shortest_route(net, 0, 2);
  CHECK(route.hubs == std::vector<HubId>{0, 1, 2});
  CHECK(route_travel_time(net, route) == 200);

  CHECK_THROWS_AS(shortest_route(net, 0, 0), ValidationError);
  CHECK_THROWS_AS(shortest_route(net, 2, 0), ValidationError);  // unreachable
  CHECK_THROWS_AS(shortest_route(net, 0, 3), ValidationError);  // isolated hub
  CHECK_THROWS_AS(shortest_route(net, 0, 99), ValidationError);
}

TEST_CASE("shortest_route tie-break picks the smaller hub sequence") {
  RoadNetwork net;
  for (HubId id : {0, 3, 5, 9}) net.add_hub(id);
  net.add_segment(0, 3, 100);
  net.add_segment(3, 9, 100);
  net.add_segment(0, 5, 100);
  net.add_segment(5, 9, 100);
  CHECK(shortest_route(net, 0, 9).hubs == std::vector<HubId>{0, 3, 9});
}

TEST_CASE("shortest_route matches brute-force enumeration on small graphs") {
  Rng rng(99);
  for (int instance = 0; instance < 60; ++instance) {
    const int n = static_cast<int>(uniform_int(rng, 2, 8));
    RoadNetwork net;
    for (HubId id = 0; id < n; ++id) net.add_hub(id);
    for (HubId from = 0; from < n; ++from)
      for (HubId to = 0; to < n; ++to) {
        if (from == to) continue;
        if (bounded_u64(rng, 100) < 45)
          net.add_segment(from, to, uniform_int(rng, 1, 9));  // small times force ties
      }
    const HubId origin = static_cast<HubId>(bounded_u64(rng, n));
    HubId destination = static_cast<HubId>(bounded_u64(rng, n));
    if (origin == destination) continue;

    std::vector<HubId> path{origin}, best_path;
    std::set<HubId> visited{origin};
    Seconds best_cost = std::numeric_limits<Seconds>::max();
    enumerate_paths(net, origin, destination, path, visited, 0, best_cost, best_path);

    if (best_path.empty()) {
      CHECK_THROWS_AS(shortest_route(net, origin, destination), ValidationError);
    } else {
      const Route found = shortest_route(net, origin, destination);
      CHECK(route_travel_time(net, found) == best_cost);
      CHECK(found.hubs == best_path);
    }
  }
}

TEST_CASE("generate_scenario honours the deadline rule and determinism") {
  NetworkGenParams net_params;
  net_params.n_hubs = 20;
  net_params.connectivity = 3.0;
  net_params.travel_time_min_s = 600;
  net_params.travel_time_max_s = 3600;
  net_params.seed = 3;
  const RoadNetwork net = generate_network(net_params);

  ScenarioGenParams params;
  params.n_trucks = 40;
  params.seed = 11;
  const Scenario scenario = generate_scenario(net, params);
  CHECK(scenario.trucks.size() == 40);
  for (const Truck& t : scenario.trucks) {
    validate_route(net, t.route);
    const Seconds free_flow = route_travel_time(net, t.route);
    CHECK(free_flow <= params.max_trip_duration_s);
    CHECK(t.deadline_s - t.start_time_s == deadline_for(0, params.waiting_budget_fraction, free_flow));
    CHECK(t.start_time_s >= params.start_window_begin_s);
    CHECK(t.start_time_s <= params.start_window_end_s);
    CHECK(t.xi_sek_per_s == params.xi_sek_per_s);
    CHECK(t.epsilon_sek_per_s == params.epsilon_sek_per_s);
  }

  // pure function of (network, params)
  const Scenario again = generate_scenario(net, params);
  CHECK(scenario_to_json(scenario, "n") == scenario_to_json(again, "n"));
  ScenarioGenParams other = params;
  other.seed = 12;
  CHECK(scenario_to_json(scenario, "n") != scenario_to_json(generate_scenario(net, other), "n"));
}

TEST_CASE("generate_scenario with zero waiting budget pins deadlines to free flow") {
  NetworkGenParams net_params;
  net_params.n_hubs = 6;
  net_params.connectivity = 2.0;
  net_params.travel_time_min_s = 100;
  net_params.travel_time_max_s = 200;
  net_params.seed = 1;
  const RoadNetwork net = generate_network(net_params);
  ScenarioGenParams params;
  params.n_trucks = 10;
  params.waiting_budget_fraction = 0.0;
  params.seed = 2;
  const Scenario scenario = generate_scenario(net, params);
  for (const Truck& t : scenario.trucks)
    CHECK(t.deadline_s == t.start_time_s + route_travel_time(net, t.route));
}

TEST_CASE("generate_scenario reports impossible draws") {
  RoadNetwork net;
  net.add_hub(0);
  net.add_hub(1);
  net.add_segment(0, 1, 50000);  // beyond any 9h trip cap
  net.add_segment(1, 0, 50000);
  ScenarioGenParams params;
  params.n_trucks = 1;
  params.seed = 4;
  params.redraw_limit = 50;
  CHECK_THROWS_WITH_AS(generate_scenario(net, params), doctest::Contains("redraws"),
                       ValidationError);
}

TEST_CASE("scenario file round-trip preserves every truck bit-exactly") {
  NetworkGenParams net_params;
  net_params.n_hubs = 10;
  net_params.connectivity = 2.0;
  net_params.seed = 21;
  const RoadNetwork net = generate_network(net_params);
  ScenarioGenParams params;
  params.n_trucks = 15;
  params.seed = 22;
  const Scenario scenario = generate_scenario(net, params);

  const auto net_path = temp_file("rt_net.json");
  const auto scen_path = temp_file("rt_scenario.json");
  save_network(net, net_path);
  save_scenario(scenario, scen_path, "rt_net.json");
  const Scenario reloaded = load_scenario(scen_path);

  REQUIRE(reloaded.trucks.size() == scenario.trucks.size());
  CHECK(reloaded.seed == scenario.seed);
  for (std::size_t i = 0; i < scenario.trucks.size(); ++i) {
    CHECK(reloaded.trucks[i].id == scenario.trucks[i].id);
    CHECK(reloaded.trucks[i].route.hubs == scenario.trucks[i].route.hubs);
    CHECK(reloaded.trucks[i].start_time_s == scenario.trucks[i].start_time_s);
    CHECK(reloaded.trucks[i].deadline_s == scenario.trucks[i].deadline_s);
    CHECK(reloaded.trucks[i].xi_sek_per_s == scenario.trucks[i].xi_sek_per_s);
    CHECK(reloaded.trucks[i].epsilon_sek_per_s == scenario.trucks[i].epsilon_sek_per_s);
  }
  CHECK(scenario_to_json(reloaded, "rt_net.json") == scenario_to_json(scenario, "rt_net.json"));

  // tampering with the referenced network is caught by the pinned hash
  RoadNetwork tampered;
  for (const auto& [id, label] : net.hubs()) tampered.add_hub(id, label);
  for (const RoadSegment& s : net.segments())
    tampered.add_segment(s.from, s.to, s.travel_time_s + 1);
  save_network(tampered, net_path);
  CHECK_THROWS_WITH_AS(load_scenario(scen_path), doctest::Contains("hash"), ValidationError);
  save_network(net, net_path);  // restore for any later test using the file
}

TEST_CASE("validate_scenario names the offending truck") {
  RoadNetwork net;
  net.add_hub(0);
  net.add_hub(1);
  net.add_segment(0, 1, 100);
  Scenario scenario;
  scenario.network = net;
  Truck t;
  t.id = 5;
  t.route.hubs = {0, 1};
  t.start_time_s = 0;
  t.deadline_s = 99;  // infeasible: free flow is 100
  scenario.trucks.push_back(t);
  CHECK_THROWS_WITH_AS(validate_scenario(scenario), doctest::Contains("truck 5"), ValidationError);
}
