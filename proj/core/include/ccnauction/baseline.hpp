#pragma once

#include <span>
#include <vector>

#include "ccnauction/obsa.hpp"

namespace ccn {

// One customer's request in the sequential combinatorial baseline: a bundle
// of typed server counts and a single all-or-nothing bid for it.
struct BundleDemand {
  AgentId agent = 0;
  std::vector<int> counts;  // one entry per server type
  double bid = 0.0;
};

struct BaselineAllocation {
  std::vector<AgentId> winners;
  std::vector<double> payments;   // pay-bid, aligned with winners
  std::vector<int> sold_per_type;
  double income = 0.0;
};

// Greedy winner determination: demands ranked by bid per requested server
// (ties by agent id), allocated all-or-nothing against per-type capacities;
// winners pay their bid. Demands that can never fit the configured
// capacities are skipped.
BaselineAllocation combinatorial_baseline_round(std::span<const BundleDemand> demands,
                                                std::span<const int> capacities);

}  // namespace ccn
