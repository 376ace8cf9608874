// Charging and compensation rules of the coordination service.
//
// Every follower in a platoon of n trucks gains the same benefit P_f; the
// leader gains nothing on the road. Each follower pays a service fee
// F_f = R_sf + R_cf, where R_sf = alpha * P_f stays with the provider and
// R_cf funds the leader's compensation. The pot left after the provider's
// cut, (n-1)*(P_f - R_sf), is split evenly over all n members, so everyone
// nets the same amount R_f = R_c = Rbar_t = (n-1)*(P_f - R_sf)/n.
//
// settle() performs the division by n exactly once and stores the three
// equal fields from that single value, so the equal-split identity and the
// conservation identity
//     (n-1)*P_f == (n-1)*R_f + R_c + F
// hold with no drift between them.

#pragma once

#include <vector>

#include "platoonsim/types.hpp"

namespace platoonsim {

/// alpha is the provider's share of each follower's benefit, in [0, 1].
struct PricingParams {
  double alpha = 0.0;
};

/// Full money ledger of one realized platoon. Amounts in SEK.
struct PlatoonSettlement {
  int n = 0;            // platoon size, >= 2
  Money p_f = 0;        // per-follower benefit
  Money r_sf = 0;       // provider share per follower
  Money r_cf = 0;       // leader-compensation contribution per follower
  Money f_f = 0;        // service fee per follower = r_sf + r_cf
  Money r_bar_t = 0;    // equal per-member profit
  Money r_c = 0;        // leader compensation total
  Money r_f = 0;        // follower net after fee
  Money f_total = 0;    // provider income = (n-1) * r_sf
  TruckId leader_id = -1;
  std::vector<TruckId> follower_ids;
};

/// Benefit of one follower for travel_time seconds behind a leader:
/// xi * travel_time.
Money per_follower_benefit(double xi_sek_per_s, Seconds travel_time);

/// Provider's cut of one follower benefit: alpha * p_f.
Money provider_share(Money p_f, const PricingParams& params);

/// Fee each follower pays: r_sf + (p_f - r_sf)/n. Throws for n < 2.
Money service_fee(int n, Money p_f, const PricingParams& params);

/// Computes the complete settlement. The leader id only labels the ledger;
/// amounts depend on (n, p_f, alpha) alone.
/// Throws std::invalid_argument on n < 2, follower-count mismatch,
/// leader listed as follower, or negative p_f.
PlatoonSettlement settle(int n, Money p_f, const PricingParams& params,
                         TruckId leader_id, std::vector<TruckId> follower_ids);

}  // namespace platoonsim
