#include "platoonsim/pricing.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace platoonsim {

Money per_follower_benefit(double xi_sek_per_s, Seconds travel_time) {
  if (xi_sek_per_s < 0) throw std::invalid_argument("per_follower_benefit: xi < 0");
  if (travel_time < 0) throw std::invalid_argument("per_follower_benefit: travel_time < 0");
  return xi_sek_per_s * static_cast<double>(travel_time);
}

Money provider_share(Money p_f, const PricingParams& params) {
  if (p_f < 0) throw std::invalid_argument("provider_share: p_f < 0");
  return params.alpha * p_f;
}

Money service_fee(int n, Money p_f, const PricingParams& params) {
  if (n < 2) throw std::invalid_argument("service_fee: platoon size must be >= 2, got " + std::to_string(n));
  const Money r_sf = provider_share(p_f, params);
  return r_sf + (p_f - r_sf) / n;
}

PlatoonSettlement settle(int n, Money p_f, const PricingParams& params,
                         TruckId leader_id, std::vector<TruckId> follower_ids) {
  if (n < 2) throw std::invalid_argument("settle: platoon size must be >= 2, got " + std::to_string(n));
  if (static_cast<int>(follower_ids.size()) != n - 1)
    throw std::invalid_argument("settle: expected " + std::to_string(n - 1) + " followers, got " +
                                std::to_string(follower_ids.size()));
  if (std::find(follower_ids.begin(), follower_ids.end(), leader_id) != follower_ids.end())
    throw std::invalid_argument("settle: leader " + std::to_string(leader_id) + " listed as follower");
  if (p_f < 0) throw std::invalid_argument("settle: p_f < 0");

  PlatoonSettlement s;
  s.n = n;
  s.p_f = p_f;
  s.leader_id = leader_id;
  s.follower_ids = std::move(follower_ids);

  s.r_sf = params.alpha * p_f;
  // One division, reused everywhere below. r_f, r_c and r_bar_t are the
  // same stored value, so the equal split holds bit-exactly; conservation
  // then carries only the rounding of this single division (a few ulp).
  const Money per_member = (p_f - s.r_sf) / n;
  s.r_cf = per_member;
  s.f_f = s.r_sf + per_member;
  s.r_bar_t = (n - 1) * per_member;
  s.r_c = s.r_bar_t;
  s.r_f = s.r_bar_t;
  s.f_total = (n - 1) * s.r_sf;
  return s;
}

}  // namespace platoonsim
