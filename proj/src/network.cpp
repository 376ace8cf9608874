#include "platoonsim/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "platoonsim/rng.hpp"

namespace platoonsim {

using nlohmann::json;

void RoadNetwork::add_hub(HubId id, std::string label) {
  if (id < 0) throw ValidationError("hub id must be non-negative, got " + std::to_string(id));
  if (!hubs_.emplace(id, std::move(label)).second)
    throw ValidationError("duplicate hub id " + std::to_string(id));
}

void RoadNetwork::add_segment(HubId from, HubId to, Seconds travel_time_s) {
  const std::string tag = "segment (" + std::to_string(from) + " -> " + std::to_string(to) + ")";
  if (!has_hub(from)) throw ValidationError(tag + ": unknown from hub " + std::to_string(from));
  if (!has_hub(to)) throw ValidationError(tag + ": unknown to hub " + std::to_string(to));
  if (from == to) throw ValidationError(tag + ": self loop");
  if (travel_time_s <= 0)
    throw ValidationError(tag + ": travel_time_s must be > 0, got " + std::to_string(travel_time_s));
  if (!out_[from].emplace(to, travel_time_s).second)
    throw ValidationError("duplicate " + tag);
  ++segment_count_;
}

bool RoadNetwork::has_segment(HubId from, HubId to) const {
  auto it = out_.find(from);
  return it != out_.end() && it->second.count(to) != 0;
}

Seconds RoadNetwork::travel_time(HubId from, HubId to) const {
  auto it = out_.find(from);
  if (it != out_.end()) {
    auto jt = it->second.find(to);
    if (jt != it->second.end()) return jt->second;
  }
  throw ValidationError("no segment (" + std::to_string(from) + " -> " + std::to_string(to) + ")");
}

const std::map<HubId, Seconds>& RoadNetwork::out(HubId from) const {
  static const std::map<HubId, Seconds> empty;
  auto it = out_.find(from);
  return it == out_.end() ? empty : it->second;
}

std::vector<RoadSegment> RoadNetwork::segments() const {
  std::vector<RoadSegment> result;
  result.reserve(segment_count_);
  for (const auto& [from, targets] : out_)
    for (const auto& [to, c] : targets) result.push_back(RoadSegment{from, to, c});
  return result;
}

Seconds Truck::free_flow_from(const RoadNetwork& net, int first_leg) const {
  Seconds total = 0;
  for (int leg = first_leg; leg < route.leg_count(); ++leg) {
    const Edge e = route.edge_at(leg);
    total += net.travel_time(e.from, e.to);
  }
  return total;
}

void validate_route(const RoadNetwork& net, const Route& route) {
  if (route.hub_count() < 2) throw ValidationError("route must visit at least 2 hubs");
  std::set<HubId> seen;
  for (HubId h : route.hubs) {
    if (!net.has_hub(h)) throw ValidationError("route references unknown hub " + std::to_string(h));
    if (!seen.insert(h).second) throw ValidationError("route repeats hub " + std::to_string(h));
  }
  for (int leg = 0; leg < route.leg_count(); ++leg) {
    const Edge e = route.edge_at(leg);
    if (!net.has_segment(e.from, e.to))
      throw ValidationError("route uses missing segment (" + std::to_string(e.from) + " -> " +
                            std::to_string(e.to) + ")");
  }
}

Seconds route_travel_time(const RoadNetwork& net, const Route& route) {
  Seconds total = 0;
  for (int leg = 0; leg < route.leg_count(); ++leg) {
    const Edge e = route.edge_at(leg);
    total += net.travel_time(e.from, e.to);
  }
  return total;
}

void validate_scenario(const Scenario& scenario) {
  std::set<TruckId> ids;
  for (const Truck& t : scenario.trucks) {
    const std::string tag = "truck " + std::to_string(t.id);
    if (t.id < 0) throw ValidationError(tag + ": id must be non-negative");
    if (!ids.insert(t.id).second) throw ValidationError("duplicate truck id " + std::to_string(t.id));
    try {
      validate_route(scenario.network, t.route);
    } catch (const ValidationError& e) {
      throw ValidationError(tag + ": " + e.what());
    }
    if (t.xi_sek_per_s < 0) throw ValidationError(tag + ": xi must be >= 0");
    if (t.epsilon_sek_per_s < 0) throw ValidationError(tag + ": epsilon must be >= 0");
    if (t.start_time_s < 0) throw ValidationError(tag + ": start_time_s must be >= 0");
    const Seconds free_flow = route_travel_time(scenario.network, t.route);
    if (t.deadline_s < t.start_time_s + free_flow)
      throw ValidationError(tag + ": deadline " + std::to_string(t.deadline_s) +
                            " is infeasible even with zero waiting (start " +
                            std::to_string(t.start_time_s) + " + free flow " +
                            std::to_string(free_flow) + ")");
  }
}

Route shortest_route(const RoadNetwork& net, HubId origin, HubId destination) {
  if (!net.has_hub(origin)) throw ValidationError("unknown origin hub " + std::to_string(origin));
  if (!net.has_hub(destination))
    throw ValidationError("unknown destination hub " + std::to_string(destination));
  if (origin == destination)
    throw ValidationError("origin equals destination (hub " + std::to_string(origin) +
                          "); routes need at least 2 hubs");

  // Dijkstra over (cost, path) keys. With strictly positive travel times,
  // the first settled path of a hub is the cheapest one with the
  // lexicographically smallest hub sequence, and it is simple.
  struct State {
    Seconds cost;
    std::vector<HubId> path;
    bool operator>(const State& other) const {
      if (cost != other.cost) return cost > other.cost;
      return path > other.path;
    }
  };
  std::priority_queue<State, std::vector<State>, std::greater<State>> queue;
  std::set<HubId> settled;
  queue.push(State{0, {origin}});
  while (!queue.empty()) {
    State state = queue.top();
    queue.pop();
    const HubId here = state.path.back();
    if (!settled.insert(here).second) continue;
    if (here == destination) return Route{std::move(state.path)};
    for (const auto& [next, c] : net.out(here)) {
      if (settled.count(next)) continue;
      State succ{state.cost + c, state.path};
      succ.path.push_back(next);
      queue.push(std::move(succ));
    }
  }
  throw ValidationError("hub " + std::to_string(destination) + " unreachable from hub " +
                        std::to_string(origin));
}

RoadNetwork generate_network(const NetworkGenParams& params) {
  if (params.n_hubs < 2) throw ValidationError("n_hubs must be >= 2");
  if (params.connectivity < 1.0) throw ValidationError("connectivity must be >= 1");
  if (params.travel_time_min_s <= 0 || params.travel_time_max_s < params.travel_time_min_s)
    throw ValidationError("travel time range must be positive and ordered");
  const long long n = params.n_hubs;
  const long long target_segments = std::llround(params.connectivity * static_cast<double>(n));
  if (target_segments > n * (n - 1))
    throw ValidationError("connectivity " + std::to_string(params.connectivity) +
                          " exceeds what " + std::to_string(n) + " hubs can carry");

  Rng rng(params.seed);
  RoadNetwork net;
  for (HubId id = 0; id < params.n_hubs; ++id) net.add_hub(id);

  auto draw_time = [&] { return uniform_int(rng, params.travel_time_min_s, params.travel_time_max_s); };

  // Random Hamiltonian cycle guarantees strong connectivity.
  std::vector<HubId> order(params.n_hubs);
  for (HubId id = 0; id < params.n_hubs; ++id) order[id] = id;
  shuffle(rng, order);
  std::set<std::pair<HubId, HubId>> used;
  for (int i = 0; i < params.n_hubs; ++i) {
    const HubId from = order[i];
    const HubId to = order[(i + 1) % params.n_hubs];
    net.add_segment(from, to, draw_time());
    used.emplace(from, to);
  }

  // Fill up to the target with a shuffled pick from the remaining pairs.
  long long missing = target_segments - static_cast<long long>(net.segment_count());
  if (missing > 0) {
    std::vector<std::pair<HubId, HubId>> candidates;
    candidates.reserve(static_cast<std::size_t>(n * (n - 1)) - used.size());
    for (HubId from = 0; from < params.n_hubs; ++from)
      for (HubId to = 0; to < params.n_hubs; ++to)
        if (from != to && !used.count({from, to})) candidates.emplace_back(from, to);
    shuffle(rng, candidates);
    for (long long i = 0; i < missing; ++i)
      net.add_segment(candidates[i].first, candidates[i].second, draw_time());
  }
  return net;
}

Seconds deadline_for(Seconds start_time_s, double waiting_budget_fraction, Seconds free_flow_s) {
  return start_time_s + static_cast<Seconds>(std::floor(
                            (1.0 + waiting_budget_fraction) * static_cast<double>(free_flow_s)));
}

Scenario generate_scenario(const RoadNetwork& net, const ScenarioGenParams& params) {
  if (params.n_trucks < 1) throw ValidationError("n_trucks must be >= 1");
  if (params.waiting_budget_fraction < 0) throw ValidationError("waiting_budget_fraction must be >= 0");
  if (params.start_window_end_s < params.start_window_begin_s)
    throw ValidationError("start window is empty");
  if (net.hub_count() < 2) throw ValidationError("network too small to place OD pairs");

  std::vector<HubId> hub_ids;
  hub_ids.reserve(net.hub_count());
  for (const auto& [id, label] : net.hubs()) hub_ids.push_back(id);

  Rng rng(params.seed);
  Scenario scenario;
  scenario.network = net;
  scenario.seed = params.seed;
  scenario.trucks.reserve(params.n_trucks);

  for (TruckId id = 0; id < params.n_trucks; ++id) {
    Truck truck;
    truck.id = id;
    truck.xi_sek_per_s = params.xi_sek_per_s;
    truck.epsilon_sek_per_s = params.epsilon_sek_per_s;
    bool placed = false;
    for (int attempt = 0; attempt < params.redraw_limit; ++attempt) {
      const HubId origin = hub_ids[bounded_u64(rng, hub_ids.size())];
      const HubId destination = hub_ids[bounded_u64(rng, hub_ids.size())];
      if (origin == destination) continue;
      Route route;
      try {
        route = shortest_route(net, origin, destination);
      } catch (const ValidationError&) {
        continue;  // unreachable destination, redraw
      }
      const Seconds free_flow = route_travel_time(net, route);
      if (free_flow > params.max_trip_duration_s) continue;
      truck.route = std::move(route);
      truck.start_time_s = uniform_int(rng, params.start_window_begin_s, params.start_window_end_s);
      truck.deadline_s = deadline_for(truck.start_time_s, params.waiting_budget_fraction, free_flow);
      placed = true;
      break;
    }
    if (!placed)
      throw ValidationError("truck " + std::to_string(id) + ": no feasible OD pair within " +
                            std::to_string(params.redraw_limit) + " redraws");
    scenario.trucks.push_back(std::move(truck));
  }
  return scenario;
}

// --- JSON file formats ---

namespace {

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return doc;
}

void check_format_version(const json& doc, const std::string& what) {
  if (!doc.contains("format_version"))
    throw ParseError(what + ": missing format_version");
  if (doc["format_version"].get<int>() != kFormatVersion)
    throw ParseError(what + ": unsupported format_version " + doc["format_version"].dump());
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << content;
}

}  // namespace

std::string network_to_json(const RoadNetwork& net) {
  json doc;
  doc["format_version"] = kFormatVersion;
  json hubs = json::array();
  for (const auto& [id, label] : net.hubs()) {
    json h;
    h["id"] = id;
    if (!label.empty()) h["label"] = label;
    hubs.push_back(std::move(h));
  }
  doc["hubs"] = std::move(hubs);
  json segments = json::array();
  for (const RoadSegment& s : net.segments()) {
    segments.push_back({{"from", s.from}, {"to", s.to}, {"travel_time_s", s.travel_time_s}});
  }
  doc["segments"] = std::move(segments);
  return doc.dump(2) + "\n";
}

void save_network(const RoadNetwork& net, const std::filesystem::path& path) {
  write_file(path, network_to_json(net));
}

RoadNetwork load_network(const std::filesystem::path& path) {
  const json doc = parse_file(path);
  try {
    check_format_version(doc, path.string());
    if (!doc.contains("hubs") || !doc.contains("segments"))
      throw ParseError(path.string() + ": missing hubs or segments");
    RoadNetwork net;
    for (const json& h : doc["hubs"]) {
      net.add_hub(h.at("id").get<HubId>(), h.value("label", std::string{}));
    }
    for (const json& s : doc["segments"]) {
      net.add_segment(s.at("from").get<HubId>(), s.at("to").get<HubId>(),
                      s.at("travel_time_s").get<Seconds>());
    }
    return net;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string scenario_to_json(const Scenario& scenario, const std::string& network_file_ref) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["network_file"] = network_file_ref;
  doc["network_hash"] = content_hash_string(network_to_json(scenario.network));
  doc["seed"] = scenario.seed;
  json trucks = json::array();
  for (const Truck& t : scenario.trucks) {
    trucks.push_back({{"id", t.id},
                      {"route", t.route.hubs},
                      {"start_time_s", t.start_time_s},
                      {"deadline_s", t.deadline_s},
                      {"xi_sek_per_s", t.xi_sek_per_s},
                      {"epsilon_sek_per_s", t.epsilon_sek_per_s}});
  }
  doc["trucks"] = std::move(trucks);
  return doc.dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path,
                   const std::string& network_file_ref) {
  write_file(path, scenario_to_json(scenario, network_file_ref));
}

Scenario load_scenario(const std::filesystem::path& path) {
  const json doc = parse_file(path);
  try {
    check_format_version(doc, path.string());
    Scenario scenario;
    const std::string network_ref = doc.at("network_file").get<std::string>();
    std::filesystem::path network_path(network_ref);
    if (network_path.is_relative()) network_path = path.parent_path() / network_path;
    scenario.network = load_network(network_path);
    if (doc.contains("network_hash")) {
      const std::string expected = doc["network_hash"].get<std::string>();
      const std::string actual = content_hash_string(network_to_json(scenario.network));
      if (expected != actual)
        throw ValidationError(path.string() + ": network file " + network_path.string() +
                              " does not match pinned hash (" + actual + " vs " + expected + ")");
    }
    scenario.seed = doc.value("seed", std::uint64_t{0});
    for (const json& t : doc.at("trucks")) {
      Truck truck;
      truck.id = t.at("id").get<TruckId>();
      truck.route.hubs = t.at("route").get<std::vector<HubId>>();
      truck.start_time_s = t.at("start_time_s").get<Seconds>();
      truck.deadline_s = t.at("deadline_s").get<Seconds>();
      truck.xi_sek_per_s = t.at("xi_sek_per_s").get<double>();
      truck.epsilon_sek_per_s = t.at("epsilon_sek_per_s").get<double>();
      scenario.trucks.push_back(std::move(truck));
    }
    validate_scenario(scenario);
    return scenario;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string scenario_content_hash(const Scenario& scenario) {
  return content_hash_string(scenario_to_json(scenario, "embedded"));
}

}  // namespace platoonsim
