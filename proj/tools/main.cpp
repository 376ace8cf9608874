// platoonsim command-line entry point.
//
//   platoonsim gen-network  --hubs 84 --seed 7 -o net.json
//   platoonsim gen-scenario --network net.json --trucks 100..500 step 100 -o scen/
//   platoonsim run          --scenario scen/scenario_M100.json --alpha 0.2 --out out/
//   platoonsim sweep        --config run.cfg
//   platoonsim report       --out out/

#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "platoonsim/cli.hpp"

int main(int argc, char** argv) {
  using namespace platoonsim;

  CLI::App app{"hub-based truck platooning simulator with a priced coordination service"};
  app.require_subcommand(1);

  // gen-network
  auto* gen_net = app.add_subcommand("gen-network", "generate a synthetic hub network file");
  NetworkGenParams net_params;
  std::string net_out = "network.json";
  gen_net->add_option("--hubs", net_params.n_hubs, "number of hubs (>= 2)");
  gen_net->add_option("--connectivity", net_params.connectivity, "average out-degree");
  gen_net->add_option("--tt-min", net_params.travel_time_min_s, "min segment travel time [s]");
  gen_net->add_option("--tt-max", net_params.travel_time_max_s, "max segment travel time [s]");
  gen_net->add_option("--seed", net_params.seed, "generator seed")->required();
  gen_net->add_option("-o,--out", net_out, "output network file");

  // gen-scenario
  auto* gen_scen = app.add_subcommand("gen-scenario", "generate scenario file(s) on a network");
  std::string scen_network;
  std::vector<std::string> trucks_spec{"100"};
  ScenarioGenParams scen_params;
  double gs_xi_per_hour = 57.5, gs_epsilon_per_hour = 260.0;
  std::uint64_t scen_seed = 0;
  std::string scen_out = "scenario.json";
  gen_scen->add_option("--network", scen_network, "network file")->required();
  gen_scen->add_option("--trucks", trucks_spec,
                       "count, list, or range: '100' | '100,250' | '100..500 step 100'")
      ->expected(1, 3);
  gen_scen->add_option("--window-begin", scen_params.start_window_begin_s, "start window begin [s]");
  gen_scen->add_option("--window-end", scen_params.start_window_end_s, "start window end [s]");
  gen_scen->add_option("--waiting-budget", scen_params.waiting_budget_fraction,
                       "waiting budget as fraction of free-flow trip time");
  gen_scen->add_option("--xi", gs_xi_per_hour, "benefit rate [SEK per follower-hour]");
  gen_scen->add_option("--epsilon", gs_epsilon_per_hour, "waiting loss rate [SEK per hour]");
  gen_scen->add_option("--max-trip", scen_params.max_trip_duration_s, "max free-flow trip [s]");
  gen_scen->add_option("--seed", scen_seed, "generator seed")->required();
  gen_scen->add_option("-o,--out", scen_out, "output file (.json) or directory for batches");

  // run
  auto* run_cmd = app.add_subcommand("run", "run one scenario at one alpha");
  std::string run_scenario, run_out = "out", run_trace;
  double run_alpha = 0.0;
  run_cmd->add_option("--scenario", run_scenario, "scenario file")->required();
  run_cmd->add_option("--alpha", run_alpha, "provider share in [0, 1]")->required();
  run_cmd->add_option("--out", run_out, "output directory for the run ledgers");
  run_cmd->add_option("--trace", run_trace, "write per-solve JSON lines to this file");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "alpha sweep over frozen scenarios");
  std::string sweep_config;
  std::string sweep_alphas, sweep_out;
  std::vector<std::string> sweep_trucks;
  std::uint64_t sweep_seed = 0;
  auto* config_opt = sweep_cmd->add_option("--config", sweep_config, "flat key=value config file");
  auto* alphas_opt = sweep_cmd->add_option("--alphas", sweep_alphas, "comma-separated alpha list");
  auto* trucks_opt = sweep_cmd->add_option("--trucks", sweep_trucks, "truck counts (see gen-scenario)")
                         ->expected(1, 3);
  auto* seed_opt = sweep_cmd->add_option("--seed", sweep_seed, "base seed");
  auto* out_opt = sweep_cmd->add_option("--out", sweep_out, "output directory");

  // report
  auto* report_cmd = app.add_subcommand("report", "summarize a sweep output directory");
  std::string report_out = "out";
  report_cmd->add_option("--out", report_out, "sweep output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_net->parsed()) return cmd_gen_network(net_params, net_out);
    if (gen_scen->parsed()) {
      scen_params.xi_sek_per_s = gs_xi_per_hour / 3600.0;
      scen_params.epsilon_sek_per_s = gs_epsilon_per_hour / 3600.0;
      scen_params.seed = scen_seed;
      return cmd_gen_scenario(scen_network, scen_params, parse_truck_counts(trucks_spec), scen_out);
    }
    if (run_cmd->parsed()) return cmd_run(run_scenario, run_alpha, run_out, run_trace);
    if (sweep_cmd->parsed()) {
      RunConfig config;
      if (config_opt->count()) config = parse_config_file(sweep_config);
      if (alphas_opt->count()) config.alphas = parse_alpha_list(sweep_alphas);
      if (trucks_opt->count()) config.truck_counts = parse_truck_counts(sweep_trucks);
      if (seed_opt->count()) config.seed = sweep_seed;
      if (out_opt->count()) config.out_dir = sweep_out;
      return cmd_sweep(config);
    }
    if (report_cmd->parsed()) return cmd_report(report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
