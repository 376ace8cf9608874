// Command implementations behind the platoonsim executable.
//
// Commands: gen-network, gen-scenario, run, sweep, report. A sweep is
// driven by a RunConfig, which can come from a flat key=value config file
// ('#' comments), with command-line flags overriding file values. All
// outputs are deterministic functions of the config, so a rerun reproduces
// every file byte for byte.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "platoonsim/network.hpp"

namespace platoonsim {

struct RunConfig {
  // Network: taken from a file when set, generated otherwise.
  std::string network_file;
  int hubs = 84;
  double connectivity = 3.0;
  Seconds travel_time_min_s = 1800;
  Seconds travel_time_max_s = 7200;

  // Scenario generation (ignored when scenario_files is set).
  std::vector<int> truck_counts = {100, 200, 300, 400, 500};
  Seconds start_window_begin_s = 8 * 3600;
  Seconds start_window_end_s = 12 * 3600;
  double waiting_budget_fraction = 0.10;
  double xi_sek_per_hour = 57.5;
  double epsilon_sek_per_hour = 260.0;
  Seconds max_trip_duration_s = 9 * 3600;

  // Pre-generated scenario files; overrides the generator when non-empty.
  std::vector<std::string> scenario_files;

  std::vector<double> alphas = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::uint64_t seed = 7;  // network seed; scenario i uses seed + 1 + i
  std::string out_dir = "out";
  std::string trace_file;  // per-solve JSON lines when set
};

/// Parses the flat config format. Unknown keys are errors.
RunConfig parse_config_file(const std::filesystem::path& path);

/// Full key=value echo of a config, also the manifest body.
std::string config_to_string(const RunConfig& config);

/// Throws on out-of-range alphas, empty lists, or bad windows/ranges.
void validate_config(const RunConfig& config);

/// "100" -> {100}; "100..500" with step -> {100, 200, ...}. Accepts the
/// token forms "100..500:100" and {"100..500", "step", "100"}.
std::vector<int> parse_truck_counts(const std::vector<std::string>& tokens);

/// Comma-separated ratios, e.g. "0,0.1,0.5,1".
std::vector<double> parse_alpha_list(const std::string& text);

int cmd_gen_network(const NetworkGenParams& params, const std::filesystem::path& out_path);

int cmd_gen_scenario(const std::filesystem::path& network_file, ScenarioGenParams base,
                     const std::vector<int>& truck_counts, const std::filesystem::path& out);

int cmd_run(const std::filesystem::path& scenario_file, double alpha,
            const std::filesystem::path& out_dir, const std::string& trace_file);

int cmd_sweep(const RunConfig& config);

int cmd_report(const std::filesystem::path& out_dir);

}  // namespace platoonsim
