#pragma once

#include "gkpz/formal.hpp"

namespace gkpz {

/// Contribution schedule of the L^2 decomposition: expectation orders
/// 0..m-1 with their parity flag, plus the deterministic top order m.
/// Order k contributes iff the residual noise count m - k is even.
struct StroockSchedule {
  int total_noises = 0;
  struct Order {
    int k;
    bool contributing;
  };
  std::vector<Order> expectation_orders;
  int top_order = 0;

  std::vector<int> contributing() const {
    std::vector<int> v;
    for (const auto& o : expectation_orders)
      if (o.contributing) v.push_back(o.k);
    return v;
  }
};

/// Iterated noise derivative D_{Xi_k} ... D_{Xi_1} t.
/// Throws std::domain_error when k exceeds the Xi count of t.
FormalSum malliavin_expand(const TreePtr& t, int k);

StroockSchedule stroock_schedule(const TreePtr& t);

}  // namespace gkpz
