#include "ccnauction/baseline.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ccn {

BaselineAllocation combinatorial_baseline_round(std::span<const BundleDemand> demands,
                                                std::span<const int> capacities) {
  for (const auto& d : demands) {
    if (d.counts.size() != capacities.size())
      throw std::invalid_argument("combinatorial_baseline_round: demand type count mismatch");
    for (int c : d.counts)
      if (c < 0) throw std::invalid_argument("combinatorial_baseline_round: negative count");
  }

  std::vector<std::size_t> order(demands.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto density = [&](std::size_t i) {
    const auto& d = demands[i];
    const long total = std::accumulate(d.counts.begin(), d.counts.end(), 0L);
    return total > 0 ? d.bid / static_cast<double>(total) : 0.0;
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    const double dl = density(l), dr = density(r);
    if (dl != dr) return dl > dr;
    return demands[l].agent < demands[r].agent;
  });

  BaselineAllocation out;
  out.sold_per_type.assign(capacities.size(), 0);
  std::vector<int> remaining(capacities.begin(), capacities.end());
  for (std::size_t i : order) {
    const auto& d = demands[i];
    const long total = std::accumulate(d.counts.begin(), d.counts.end(), 0L);
    if (total == 0) continue;
    bool fits = true;
    for (std::size_t t = 0; t < remaining.size(); ++t)
      if (d.counts[t] > remaining[t]) fits = false;
    if (!fits) continue;
    for (std::size_t t = 0; t < remaining.size(); ++t) {
      remaining[t] -= d.counts[t];
      out.sold_per_type[t] += d.counts[t];
    }
    out.winners.push_back(d.agent);
    out.payments.push_back(d.bid);
    out.income += d.bid;
  }
  return out;
}

}  // namespace ccn
