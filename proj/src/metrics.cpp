#include "platoonsim/metrics.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace platoonsim {

std::pair<Money, Money> provider_profit(const SimResult& result) {
  Money gross = 0;
  for (const SettlementRecord& r : result.settlements) gross += r.settlement.f_total;
  return {gross, gross - result.provider.failed_wait_paid};
}

Money system_utility(const SimResult& result) {
  Money total = 0;
  for (const TruckLedger& t : result.trucks) total += t.net_profit();
  return total + result.provider.net_profit();
}

Money avg_truck_profit(const SimResult& result) {
  if (result.trucks.empty()) throw std::invalid_argument("avg_truck_profit: no trucks");
  Money total = 0;
  for (const TruckLedger& t : result.trucks) total += t.net_profit();
  return total / static_cast<double>(result.trucks.size());
}

double avg_waiting_time(const SimResult& result) {
  if (result.trucks.empty()) throw std::invalid_argument("avg_waiting_time: no trucks");
  Seconds total = 0;
  for (const TruckLedger& t : result.trucks)
    for (const Seconds w : t.realized_waits) total += w;
  return static_cast<double>(total) / static_cast<double>(result.trucks.size());
}

SweepRow make_sweep_row(double alpha, const SimResult& result) {
  SweepRow row;
  row.n_trucks = static_cast<int>(result.trucks.size());
  row.alpha = alpha;
  const auto [gross, net] = provider_profit(result);
  row.provider_profit_gross = gross;
  row.provider_profit_net = net;
  row.system_utility = system_utility(result);
  row.avg_truck_profit = avg_truck_profit(result);
  row.avg_waiting_time_s = avg_waiting_time(result);
  row.platooning_rate = result.total_edge_traversals == 0
                            ? 0.0
                            : static_cast<double>(result.platooned_traversals) /
                                  static_cast<double>(result.total_edge_traversals);
  for (const SettlementRecord& r : result.settlements)
    if (r.spontaneous) ++row.spontaneous_platoon_count;
  return row;
}

std::vector<SweepRow> sweep(const Scenario& scenario, const std::vector<double>& alphas,
                            const RunOptions& options) {
  if (alphas.empty()) throw std::invalid_argument("sweep: empty alpha list");
  for (const double a : alphas)
    if (a < 0.0 || a > 1.0)
      throw std::invalid_argument("sweep: alpha " + std::to_string(a) + " outside [0, 1]");
  std::vector<SweepRow> rows;
  rows.reserve(alphas.size());
  for (const double alpha : alphas) {
    const SimResult result = run(scenario, PricingParams{alpha}, options);
    rows.push_back(make_sweep_row(alpha, result));
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "n_trucks,alpha,provider_profit_gross_sek,provider_profit_net_sek,"
         "system_utility_sek,avg_truck_profit_sek,avg_waiting_time_s,"
         "platooning_rate,spontaneous_platoon_count\n";
  for (const SweepRow& r : rows) {
    out << r.n_trucks << ',' << format_ratio(r.alpha) << ','
        << format_money(r.provider_profit_gross) << ',' << format_money(r.provider_profit_net)
        << ',' << format_money(r.system_utility) << ',' << format_money(r.avg_truck_profit) << ','
        << format_money(r.avg_waiting_time_s) << ',' << format_money(r.platooning_rate) << ','
        << r.spontaneous_platoon_count << '\n';
  }
  return out.str();
}

void write_plotdata(const std::vector<SweepRow>& rows, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  using Getter = double (*)(const SweepRow&);
  static const std::pair<const char*, Getter> metrics[] = {
      {"provider_profit_gross", [](const SweepRow& r) { return r.provider_profit_gross; }},
      {"provider_profit_net", [](const SweepRow& r) { return r.provider_profit_net; }},
      {"system_utility", [](const SweepRow& r) { return r.system_utility; }},
      {"avg_truck_profit", [](const SweepRow& r) { return r.avg_truck_profit; }},
      {"avg_waiting_time", [](const SweepRow& r) { return r.avg_waiting_time_s; }},
  };
  std::map<int, std::vector<const SweepRow*>> by_size;
  for (const SweepRow& r : rows) by_size[r.n_trucks].push_back(&r);
  for (const auto& [n_trucks, group] : by_size) {
    for (const auto& [name, getter] : metrics) {
      const auto path = dir / (std::string(name) + "_M" + std::to_string(n_trucks) + ".dat");
      std::ofstream out(path, std::ios::binary);
      if (!out) throw ParseError("cannot write " + path.string());
      out << "# alpha " << name << "\n";
      for (const SweepRow* r : group)
        out << format_ratio(r->alpha) << ' ' << format_money(getter(*r)) << '\n';
    }
  }
}

}  // namespace platoonsim
