#include "gkpz/malliavin.hpp"

#include <stdexcept>

#include "gkpz/derive.hpp"

namespace gkpz {

FormalSum malliavin_expand(const TreePtr& t, int k) {
  if (k > xi_count(t))
    throw std::domain_error("malliavin_expand: order exceeds noise count");
  FormalSum s = FormalSum::of(t);
  for (int j = 1; j <= k; ++j) s = noise_derive(s, j);
  return s;
}

StroockSchedule stroock_schedule(const TreePtr& t) {
  StroockSchedule sch;
  sch.total_noises = noise_count(t);
  sch.top_order = sch.total_noises;
  for (int k = 0; k < sch.total_noises; ++k)
    sch.expectation_orders.push_back({k, (sch.total_noises - k) % 2 == 0});
  return sch;
}

}  // namespace gkpz
