#include "platoonsim/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "platoonsim/metrics.hpp"
#include "platoonsim/sim.hpp"

namespace platoonsim {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream stream(s);
  std::string item;
  while (std::getline(stream, item, sep)) parts.push_back(trim(item));
  return parts;
}

long long to_int(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParseError("config key '" + key + "': expected integer, got '" + value + "'");
  }
}

double to_double(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParseError("config key '" + key + "': expected number, got '" + value + "'");
  }
}

std::string format_seconds_of_day(Seconds s) { return std::to_string(s); }

}  // namespace

std::vector<double> parse_alpha_list(const std::string& text) {
  std::vector<double> alphas;
  for (const std::string& token : split(text, ',')) {
    if (token.empty()) continue;
    alphas.push_back(to_double(token, "alphas"));
  }
  if (alphas.empty()) throw ParseError("alphas: empty list");
  return alphas;
}

std::vector<int> parse_truck_counts(const std::vector<std::string>& tokens) {
  // Accepted forms: "100" | "100,200,300" | "100..500" [step 100] | "100..500:100"
  if (tokens.empty()) throw ParseError("trucks: empty specification");
  std::string spec = tokens[0];
  long long step = 100;
  if (tokens.size() == 3 && tokens[1] == "step") {
    step = to_int(tokens[2], "trucks step");
  } else if (tokens.size() != 1) {
    throw ParseError("trucks: expected '<n>', '<a>..<b>', or '<a>..<b> step <s>'");
  }
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    step = to_int(spec.substr(colon + 1), "trucks step");
    spec = spec.substr(0, colon);
  }
  const auto dots = spec.find("..");
  std::vector<int> counts;
  if (dots == std::string::npos) {
    for (const std::string& part : split(spec, ','))
      counts.push_back(static_cast<int>(to_int(part, "trucks")));
  } else {
    const long long lo = to_int(spec.substr(0, dots), "trucks");
    const long long hi = to_int(spec.substr(dots + 2), "trucks");
    if (step <= 0 || hi < lo) throw ParseError("trucks: bad range " + spec);
    for (long long v = lo; v <= hi; v += step) counts.push_back(static_cast<int>(v));
  }
  for (const int c : counts)
    if (c < 1) throw ParseError("trucks: counts must be >= 1");
  if (counts.empty()) throw ParseError("trucks: empty specification");
  return counts;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path.string());
  RunConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "network_file") {
      config.network_file = value;
    } else if (key == "hubs") {
      config.hubs = static_cast<int>(to_int(value, key));
    } else if (key == "connectivity") {
      config.connectivity = to_double(value, key);
    } else if (key == "travel_time_min_s") {
      config.travel_time_min_s = to_int(value, key);
    } else if (key == "travel_time_max_s") {
      config.travel_time_max_s = to_int(value, key);
    } else if (key == "trucks") {
      std::vector<std::string> tokens;
      std::stringstream stream(value);
      std::string token;
      while (stream >> token) tokens.push_back(token);
      config.truck_counts = parse_truck_counts(tokens);
    } else if (key == "start_window_begin_s") {
      config.start_window_begin_s = to_int(value, key);
    } else if (key == "start_window_end_s") {
      config.start_window_end_s = to_int(value, key);
    } else if (key == "waiting_budget_fraction") {
      config.waiting_budget_fraction = to_double(value, key);
    } else if (key == "xi_sek_per_hour") {
      config.xi_sek_per_hour = to_double(value, key);
    } else if (key == "epsilon_sek_per_hour") {
      config.epsilon_sek_per_hour = to_double(value, key);
    } else if (key == "max_trip_duration_s") {
      config.max_trip_duration_s = to_int(value, key);
    } else if (key == "scenario_files") {
      config.scenario_files = split(value, ',');
      std::erase(config.scenario_files, std::string{});
    } else if (key == "alphas") {
      config.alphas = parse_alpha_list(value);
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(to_int(value, key));
    } else if (key == "out_dir") {
      config.out_dir = value;
    } else if (key == "trace_file") {
      config.trace_file = value;
    } else {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return config;
}

std::string config_to_string(const RunConfig& config) {
  std::ostringstream out;
  out << "format_version = " << kFormatVersion << "\n";
  out << "network_file = " << config.network_file << "\n";
  out << "hubs = " << config.hubs << "\n";
  out << "connectivity = " << format_ratio(config.connectivity) << "\n";
  out << "travel_time_min_s = " << config.travel_time_min_s << "\n";
  out << "travel_time_max_s = " << config.travel_time_max_s << "\n";
  out << "trucks = ";
  for (std::size_t i = 0; i < config.truck_counts.size(); ++i)
    out << (i ? "," : "") << config.truck_counts[i];
  out << "\n";
  out << "start_window_begin_s = " << format_seconds_of_day(config.start_window_begin_s) << "\n";
  out << "start_window_end_s = " << format_seconds_of_day(config.start_window_end_s) << "\n";
  out << "waiting_budget_fraction = " << format_ratio(config.waiting_budget_fraction) << "\n";
  out << "xi_sek_per_hour = " << format_ratio(config.xi_sek_per_hour) << "\n";
  out << "epsilon_sek_per_hour = " << format_ratio(config.epsilon_sek_per_hour) << "\n";
  out << "max_trip_duration_s = " << config.max_trip_duration_s << "\n";
  out << "scenario_files = ";
  for (std::size_t i = 0; i < config.scenario_files.size(); ++i)
    out << (i ? "," : "") << config.scenario_files[i];
  out << "\n";
  out << "alphas = ";
  for (std::size_t i = 0; i < config.alphas.size(); ++i)
    out << (i ? "," : "") << format_ratio(config.alphas[i]);
  out << "\n";
  out << "seed = " << config.seed << "\n";
  out << "out_dir = " << config.out_dir << "\n";
  out << "trace_file = " << config.trace_file << "\n";
  return out.str();
}

void validate_config(const RunConfig& config) {
  if (config.alphas.empty()) throw ValidationError("config: alphas must be non-empty");
  for (const double a : config.alphas)
    if (a < 0.0 || a > 1.0)
      throw ValidationError("config: alpha " + format_ratio(a) + " outside [0, 1]");
  if (config.truck_counts.empty() && config.scenario_files.empty())
    throw ValidationError("config: need truck counts or scenario files");
  for (const int c : config.truck_counts)
    if (c < 1) throw ValidationError("config: truck counts must be >= 1");
  if (config.start_window_end_s < config.start_window_begin_s)
    throw ValidationError("config: empty start window");
  if (config.waiting_budget_fraction < 0)
    throw ValidationError("config: waiting_budget_fraction must be >= 0");
  if (config.xi_sek_per_hour < 0 || config.epsilon_sek_per_hour < 0)
    throw ValidationError("config: rates must be >= 0");
  if (!config.network_file.empty() && !std::filesystem::exists(config.network_file))
    throw ValidationError("config: network file " + config.network_file + " does not exist");
  for (const std::string& f : config.scenario_files)
    if (!std::filesystem::exists(f))
      throw ValidationError("config: scenario file " + f + " does not exist");
  if (config.network_file.empty()) {
    if (config.hubs < 2) throw ValidationError("config: hubs must be >= 2");
    if (config.travel_time_min_s <= 0 || config.travel_time_max_s < config.travel_time_min_s)
      throw ValidationError("config: bad travel time range");
  }
}

namespace {

std::string alpha_tag(double alpha) {
  std::string tag = format_ratio(alpha);
  std::replace(tag.begin(), tag.end(), '.', 'p');
  return tag;
}

ScenarioGenParams scenario_params_from(const RunConfig& config, int n_trucks,
                                       std::uint64_t scenario_seed) {
  ScenarioGenParams params;
  params.n_trucks = n_trucks;
  params.start_window_begin_s = config.start_window_begin_s;
  params.start_window_end_s = config.start_window_end_s;
  params.waiting_budget_fraction = config.waiting_budget_fraction;
  params.xi_sek_per_s = config.xi_sek_per_hour / 3600.0;
  params.epsilon_sek_per_s = config.epsilon_sek_per_hour / 3600.0;
  params.max_trip_duration_s = config.max_trip_duration_s;
  params.seed = scenario_seed;
  return params;
}

}  // namespace

int cmd_gen_network(const NetworkGenParams& params, const std::filesystem::path& out_path) {
  const RoadNetwork net = generate_network(params);
  const std::string body = network_to_json(net);
  if (out_path.has_parent_path()) std::filesystem::create_directories(out_path.parent_path());
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + out_path.string());
  out << body;
  std::cout << out_path.string() << " " << content_hash_string(body) << "\n";
  return 0;
}

int cmd_gen_scenario(const std::filesystem::path& network_file, ScenarioGenParams base,
                     const std::vector<int>& truck_counts, const std::filesystem::path& out) {
  const RoadNetwork net = load_network(network_file);
  const bool single_file = truck_counts.size() == 1 && out.extension() == ".json";
  if (!single_file) std::filesystem::create_directories(out);
  for (std::size_t i = 0; i < truck_counts.size(); ++i) {
    ScenarioGenParams params = base;
    params.n_trucks = truck_counts[i];
    params.seed = base.seed + i;
    const Scenario scenario = generate_scenario(net, params);
    const std::filesystem::path path =
        single_file ? out : out / ("scenario_M" + std::to_string(params.n_trucks) + ".json");
    // Reference the network relative to the scenario file, so the pair can
    // move together; fall back to an absolute path across filesystems.
    std::error_code ec;
    std::filesystem::path ref =
        std::filesystem::relative(std::filesystem::absolute(network_file),
                                  std::filesystem::absolute(path).parent_path(), ec);
    if (ec || ref.empty()) ref = std::filesystem::absolute(network_file);
    save_scenario(scenario, path, ref.string());
    std::cout << path.string() << " " << scenario_content_hash(scenario) << "\n";
  }
  return 0;
}

int cmd_run(const std::filesystem::path& scenario_file, double alpha,
            const std::filesystem::path& out_dir, const std::string& trace_file) {
  if (alpha < 0.0 || alpha > 1.0)
    throw ValidationError("alpha " + format_ratio(alpha) + " outside [0, 1]");
  const Scenario scenario = load_scenario(scenario_file);
  RunOptions options;
  std::ofstream trace;
  if (!trace_file.empty()) {
    trace.open(trace_file, std::ios::binary);
    if (!trace) throw ParseError("cannot write trace file " + trace_file);
    options.solver_trace = &trace;
  }
  const PricingParams params{alpha};
  const SimResult result = run(scenario, params, options);
  write_run_ledgers(result, scenario, params, out_dir);
  const SweepRow row = make_sweep_row(alpha, result);
  std::cout << sweep_csv({row});
  return 0;
}

int cmd_sweep(const RunConfig& config) {
  validate_config(config);  // nothing is written before this passes

  const std::filesystem::path out_dir(config.out_dir);
  std::filesystem::create_directories(out_dir);

  RoadNetwork net;
  std::vector<Scenario> scenarios;
  if (!config.scenario_files.empty()) {
    for (const std::string& f : config.scenario_files) scenarios.push_back(load_scenario(f));
  } else {
    if (config.network_file.empty()) {
      NetworkGenParams params;
      params.n_hubs = config.hubs;
      params.connectivity = config.connectivity;
      params.travel_time_min_s = config.travel_time_min_s;
      params.travel_time_max_s = config.travel_time_max_s;
      params.seed = config.seed;
      net = generate_network(params);
    } else {
      net = load_network(config.network_file);
    }
    save_network(net, out_dir / "network.json");
    for (std::size_t i = 0; i < config.truck_counts.size(); ++i) {
      scenarios.push_back(generate_scenario(
          net, scenario_params_from(config, config.truck_counts[i], config.seed + 1 + i)));
      save_scenario(scenarios.back(),
                    out_dir / ("scenario_M" + std::to_string(config.truck_counts[i]) + ".json"),
                    "network.json");
    }
  }

  std::ofstream trace;
  RunOptions options;
  if (!config.trace_file.empty()) {
    trace.open(config.trace_file, std::ios::binary);
    if (!trace) throw ParseError("cannot write trace file " + config.trace_file);
    options.solver_trace = &trace;
  }

  std::vector<SweepRow> rows;
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const Scenario& scenario = scenarios[s];
    for (const double alpha : config.alphas) {
      const PricingParams params{alpha};
      const SimResult result = run(scenario, params, options);
      // Scenario ordinal keeps directories distinct even for equal fleets.
      write_run_ledgers(result, scenario, params,
                        out_dir / "runs" /
                            ("s" + std::to_string(s) + "_M" +
                             std::to_string(scenario.trucks.size()) + "_alpha" + alpha_tag(alpha)));
      rows.push_back(make_sweep_row(alpha, result));
    }
  }

  {
    std::ofstream out(out_dir / "sweep.csv", std::ios::binary);
    if (!out) throw ParseError("cannot write " + (out_dir / "sweep.csv").string());
    out << sweep_csv(rows);
  }
  write_plotdata(rows, out_dir / "plotdata");
  {
    std::ofstream out(out_dir / "manifest.txt", std::ios::binary);
    if (!out) throw ParseError("cannot write " + (out_dir / "manifest.txt").string());
    out << config_to_string(config);
  }
  std::cout << "wrote " << rows.size() << " sweep rows to " << (out_dir / "sweep.csv").string()
            << "\n";
  return 0;
}

int cmd_report(const std::filesystem::path& out_dir) {
  const std::filesystem::path csv_path = out_dir / "sweep.csv";
  std::ifstream in(csv_path);
  if (!in) throw ParseError("cannot open " + csv_path.string() + "; run sweep first");
  std::string header;
  if (!std::getline(in, header)) throw ParseError(csv_path.string() + ": empty file");
  struct Row {
    int n_trucks;
    double alpha, gross, net, utility, truck_profit, wait_s, rate;
    long long spontaneous;
  };
  std::vector<Row> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto parts = split(line, ',');
    if (parts.size() != 9) throw ParseError(csv_path.string() + ": malformed row '" + line + "'");
    rows.push_back(Row{static_cast<int>(to_int(parts[0], "n_trucks")),
                       to_double(parts[1], "alpha"), to_double(parts[2], "gross"),
                       to_double(parts[3], "net"), to_double(parts[4], "utility"),
                       to_double(parts[5], "truck_profit"), to_double(parts[6], "wait"),
                       to_double(parts[7], "rate"), to_int(parts[8], "spontaneous")});
  }
  std::printf("%8s %6s %14s %14s %14s %12s %10s %8s %6s\n", "trucks", "alpha", "gross[SEK]",
              "net[SEK]", "utility[SEK]", "truck[SEK]", "wait[s]", "rate", "spont");
  std::map<int, const Row*> best_net;
  for (const Row& r : rows) {
    std::printf("%8d %6.2f %14.2f %14.2f %14.2f %12.2f %10.1f %8.4f %6lld\n", r.n_trucks, r.alpha,
                r.gross, r.net, r.utility, r.truck_profit, r.wait_s, r.rate, r.spontaneous);
    auto& slot = best_net[r.n_trucks];
    if (!slot || r.net > slot->net) slot = &r;
  }
  for (const auto& [n, row] : best_net)
    std::printf("M=%d: provider net profit peaks at alpha=%.2f (%.2f SEK)\n", n, row->alpha,
                row->net);
  return 0;
}

}  // namespace platoonsim
