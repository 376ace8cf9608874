// Aggregate metrics over one run and alpha sweeps over a frozen scenario.

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "platoonsim/sim.hpp"

namespace platoonsim {

/// One (scenario, alpha) row of a sweep.
struct SweepRow {
  int n_trucks = 0;
  double alpha = 0;
  Money provider_profit_gross = 0;
  Money provider_profit_net = 0;
  Money system_utility = 0;
  Money avg_truck_profit = 0;
  double avg_waiting_time_s = 0;
  double platooning_rate = 0;  // platooned edge traversals / all traversals
  long long spontaneous_platoon_count = 0;
};

/// (gross, net): gross is the total fee income over settlements, net
/// deducts the failed-wait compensation paid out. Leader compensation is
/// pass-through and appears in neither.
std::pair<Money, Money> provider_profit(const SimResult& result);

/// Total welfare: every truck's net profit plus the provider's net profit.
/// All fees and compensations cancel, so on a fixed realized outcome this
/// equals realized platoon benefit minus waiting losses, independent of
/// alpha.
Money system_utility(const SimResult& result);

/// Mean per-truck net profit (benefit - fees + compensations - waiting
/// loss). Throws on an empty result.
Money avg_truck_profit(const SimResult& result);

/// Mean realized waiting per truck over the whole trip, in seconds.
double avg_waiting_time(const SimResult& result);

SweepRow make_sweep_row(double alpha, const SimResult& result);

/// One run per alpha on the identical frozen scenario; rows ordered as the
/// alphas are given (callers pass them ascending).
std::vector<SweepRow> sweep(const Scenario& scenario, const std::vector<double>& alphas,
                            const RunOptions& options = {});

/// Fixed header + one line per row.
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// One two-column file (alpha, metric) per metric and truck count, for any
/// plotting tool: <dir>/<metric>_M<n>.dat.
void write_plotdata(const std::vector<SweepRow>& rows, const std::filesystem::path& dir);

}  // namespace platoonsim
