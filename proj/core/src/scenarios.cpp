#include "ccnauction/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "ccnauction/baseline.hpp"
#include "ccnauction/rng.hpp"

namespace ccn {

namespace {

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double sample_variance(const std::vector<double>& v) {
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / (static_cast<double>(v.size()) - 1.0);
}

}  // namespace

std::optional<double> payment_variance(const MetricsReport& report) {
  std::vector<double> all;
  for (const auto& list : report.payments) all.insert(all.end(), list.begin(), list.end());
  if (all.size() < 2) return std::nullopt;
  return sample_variance(all);
}

std::vector<double> obsa_final_payments(const BidDistribution& bids, double lambda,
                                        long delta, double pB, Mechanism mechanism,
                                        long reps, std::uint64_t seed) {
  MarketConfig mc{bids, lambda, delta, pB, 0};
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(reps));
  std::uint64_t attempt = 0;
  while (out.size() < static_cast<std::size_t>(reps)) {
    const EpisodeLog log =
        simulate_obsa(mc, mechanism, delta + 1, derive_seed(seed, attempt++));
    // The only final payment a (delta + 1)-round horizon can produce belongs
    // to the round-0 entrant; rounds without a qualifying entry yield none.
    if (!log.final_payments.empty()) out.push_back(log.final_payments.front().second);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> baseline_winner_payments(const BidDistribution& bids, double lambda,
                                             long reps, std::uint64_t seed) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(reps));
  std::uint64_t attempt = 0;
  while (out.size() < static_cast<std::size_t>(reps)) {
    std::mt19937_64 rng(derive_seed(seed, attempt++));
    std::poisson_distribution<int> pois(lambda);
    const int n = pois(rng);
    if (n < 1) continue;
    std::vector<BundleDemand> demands(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      demands[static_cast<std::size_t>(i)].agent = static_cast<AgentId>(i + 1);
      demands[static_cast<std::size_t>(i)].counts = {1};
      demands[static_cast<std::size_t>(i)].bid = bids.sample_value(rng);
    }
    const int capacity[] = {1};
    const BaselineAllocation alloc = combinatorial_baseline_round(demands, capacity);
    if (!alloc.payments.empty()) out.push_back(alloc.payments.front());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Scenario1Result run_scenario1(const Config& cfg, Mechanism mechanism) {
  cfg.validate();
  const BidDistribution bids = make_bid_distribution(cfg);

  Scenario1Result result;
  std::uint64_t cell = mechanism == Mechanism::SecondPrice ? 1000 : 0;
  for (double lambda : cfg.lambdas) {
    const ChainModel chain = build_chain(bids, lambda, cfg.pB);
    for (long delta = 0; delta <= cfg.max_delta; ++delta, ++cell) {
      Scenario1Row row;
      row.lambda = lambda;
      row.delta = delta;
      row.analytic = expected_revenue(chain, mechanism, delta);
      const std::vector<double> samples =
          obsa_final_payments(bids, lambda, delta, cfg.pB, mechanism, cfg.reps,
                              derive_seed(cfg.seed, cell));
      row.simulated = mean_of(samples);
      row.stderr_ = samples.size() > 1
                        ? std::sqrt(sample_variance(samples) / samples.size())
                        : 0.0;
      result.rows.push_back(row);
      result.report.payments.push_back(samples);
      result.report.total_winners += static_cast<long>(samples.size());
    }
  }

  std::vector<double> means;
  for (const auto& row : result.rows) means.push_back(row.simulated);
  result.report.mean_income = mean_of(means);
  if (auto var = payment_variance(result.report)) result.report.income_variance = *var;
  return result;
}

Scenario2Result run_scenario2(const Config& cfg) {
  cfg.validate();
  if (cfg.gammas.empty()) throw std::invalid_argument("run_scenario2: gammas empty");

  Scenario2Result result;
  result.gammas = cfg.gammas;
  std::sort(result.gammas.begin(), result.gammas.end());
  const double h = cfg.Tp / static_cast<double>(cfg.ode_steps);
  for (double gamma : result.gammas) {
    BidCurve curve = solve_second_price_curve(make_stage_two(cfg, gamma), h);
    if (curve.values.front() != cfg.varpi)
      throw std::logic_error("run_scenario2: curve does not start at varpi");
    for (std::size_t i = 1; i < curve.size(); ++i)
      if (gamma > 0.0 && curve.values[i] >= curve.values[i - 1])
        throw std::logic_error("run_scenario2: curve not strictly decreasing");
    if (!result.curves.empty()) {
      const BidCurve& prev = result.curves.back();
      for (std::size_t i = 1; i < curve.size(); ++i)
        if (curve.values[i] >= prev.values[i])
          throw std::logic_error("run_scenario2: gamma ordering violated");
    }
    result.curves.push_back(std::move(curve));
  }
  return result;
}

namespace {

struct Scenario3Customer {
  AgentId agent;
  std::vector<int> counts;
  std::vector<double> unit_values;  // per-type per-server valuation
  double bundle_bid;
  long size;
};

struct Scenario3Data {
  std::vector<std::vector<int>> capacity;           // [minute][type]
  std::vector<std::vector<Scenario3Customer>> arrivals;  // [minute]
};

Scenario3Data make_scenario3_data(const Config& cfg) {
  Scenario3Data data;
  std::mt19937_64 rng(derive_seed(cfg.seed, 0x5C3));
  std::uniform_real_distribution<double> rate(cfg.rate_min, cfg.rate_max);
  std::vector<double> rates(static_cast<std::size_t>(cfg.types));
  for (auto& r : rates) r = rate(rng);

  std::uniform_int_distribution<int> size(cfg.bundle_min, cfg.bundle_max);
  std::uniform_int_distribution<int> type(0, cfg.types - 1);
  std::uniform_real_distribution<double> value(cfg.v_min, cfg.v_max);
  std::poisson_distribution<int> customers(cfg.customer_mean);

  AgentId next = 1;
  data.capacity.resize(static_cast<std::size_t>(cfg.horizon));
  data.arrivals.resize(static_cast<std::size_t>(cfg.horizon));
  for (long t = 0; t < cfg.horizon; ++t) {
    auto& caps = data.capacity[static_cast<std::size_t>(t)];
    caps.resize(static_cast<std::size_t>(cfg.types));
    for (int k = 0; k < cfg.types; ++k) {
      std::poisson_distribution<int> avail(cfg.capacity * rates[static_cast<std::size_t>(k)]);
      caps[static_cast<std::size_t>(k)] = std::min(cfg.capacity, avail(rng));
    }
    const int n = customers(rng);
    for (int i = 0; i < n; ++i) {
      Scenario3Customer c;
      c.agent = next++;
      c.counts.assign(static_cast<std::size_t>(cfg.types), 0);
      c.unit_values.resize(static_cast<std::size_t>(cfg.types));
      for (auto& v : c.unit_values) v = value(rng);
      c.size = size(rng);
      for (long s = 0; s < c.size; ++s) ++c.counts[static_cast<std::size_t>(type(rng))];
      c.bundle_bid = 0.0;
      for (int k = 0; k < cfg.types; ++k)
        c.bundle_bid += c.counts[static_cast<std::size_t>(k)] *
                        c.unit_values[static_cast<std::size_t>(k)];
      data.arrivals[static_cast<std::size_t>(t)].push_back(std::move(c));
    }
  }
  return data;
}

}  // namespace

Scenario3Result run_scenario3(const Config& cfg) {
  cfg.validate();
  const Scenario3Data data = make_scenario3_data(cfg);

  Scenario3Result result;
  result.obsa.participants.resize(static_cast<std::size_t>(cfg.horizon));
  result.baseline.participants.resize(static_cast<std::size_t>(cfg.horizon));

  // Baseline: customers queue whole bundles; unallocated bundles retry.
  {
    std::vector<BundleDemand> queue;
    std::vector<double> payments;
    for (long t = 0; t < cfg.horizon; ++t) {
      for (const auto& c : data.arrivals[static_cast<std::size_t>(t)])
        queue.push_back(BundleDemand{c.agent, c.counts, c.bundle_bid});
      result.baseline.participants[static_cast<std::size_t>(t)] =
          static_cast<long>(data.arrivals[static_cast<std::size_t>(t)].size());
      const auto& caps = data.capacity[static_cast<std::size_t>(t)];
      const BaselineAllocation alloc = combinatorial_baseline_round(queue, caps);
      for (std::size_t k = 0; k < caps.size(); ++k)
        if (alloc.sold_per_type[k] > caps[k])
          throw std::logic_error("run_scenario3: baseline capacity violated");
      for (std::size_t w = 0; w < alloc.winners.size(); ++w) {
        payments.push_back(alloc.payments[w]);
        queue.erase(std::find_if(queue.begin(), queue.end(), [&](const BundleDemand& d) {
          return d.agent == alloc.winners[w];
        }));
      }
      result.baseline.total_winners += static_cast<long>(alloc.winners.size());
      result.baseline.total_sold += std::accumulate(alloc.sold_per_type.begin(),
                                                    alloc.sold_per_type.end(), 0L);
    }
    std::sort(payments.begin(), payments.end());
    result.baseline.mean_income =
        cfg.horizon > 0
            ? std::accumulate(payments.begin(), payments.end(), 0.0) / cfg.horizon
            : 0.0;
    result.baseline.payments.push_back(std::move(payments));
    if (auto var = payment_variance(result.baseline))
      result.baseline.income_variance = *var;
  }

  // OBSA side: per-type unit auctions each minute; every queued unit demand
  // above the clearing price is served, winners pay the highest rejected bid
  // (price floor v_min), so partial bundle fills carry no penalty.
  {
    struct Unit {
      AgentId agent;
      double bid;
    };
    std::vector<std::vector<Unit>> queues(static_cast<std::size_t>(cfg.types));
    std::vector<long> served_units;  // per customer, indexed by agent id
    std::vector<long> want_units;
    auto ensure = [&](AgentId id) {
      if (served_units.size() <= id) {
        served_units.resize(id + 1, 0);
        want_units.resize(id + 1, 0);
      }
    };
    std::vector<double> payments;
    for (long t = 0; t < cfg.horizon; ++t) {
      for (const auto& c : data.arrivals[static_cast<std::size_t>(t)]) {
        ensure(c.agent);
        want_units[c.agent] = c.size;
        for (int k = 0; k < cfg.types; ++k)
          for (int s = 0; s < c.counts[static_cast<std::size_t>(k)]; ++s)
            queues[static_cast<std::size_t>(k)].push_back(
                Unit{c.agent, c.unit_values[static_cast<std::size_t>(k)]});
      }
      result.obsa.participants[static_cast<std::size_t>(t)] =
          static_cast<long>(data.arrivals[static_cast<std::size_t>(t)].size());
      const auto& caps = data.capacity[static_cast<std::size_t>(t)];
      for (int k = 0; k < cfg.types; ++k) {
        auto& q = queues[static_cast<std::size_t>(k)];
        std::stable_sort(q.begin(), q.end(), [](const Unit& l, const Unit& r) {
          if (l.bid != r.bid) return l.bid > r.bid;
          return l.agent < r.agent;
        });
        const std::size_t take =
            std::min(q.size(), static_cast<std::size_t>(caps[static_cast<std::size_t>(k)]));
        if (take == 0) continue;
        if (take > static_cast<std::size_t>(caps[static_cast<std::size_t>(k)]))
          throw std::logic_error("run_scenario3: obsa capacity violated");
        const double price = take < q.size() ? q[take].bid : cfg.v_min;
        for (std::size_t i = 0; i < take; ++i) {
          payments.push_back(price);
          ensure(q[i].agent);
          if (++served_units[q[i].agent] == want_units[q[i].agent])
            ++result.obsa.total_winners;
        }
        result.obsa.total_sold += static_cast<long>(take);
        q.erase(q.begin(), q.begin() + static_cast<long>(take));
      }
    }
    std::sort(payments.begin(), payments.end());
    result.obsa.mean_income =
        cfg.horizon > 0
            ? std::accumulate(payments.begin(), payments.end(), 0.0) / cfg.horizon
            : 0.0;
    result.obsa.payments.push_back(std::move(payments));
    if (auto var = payment_variance(result.obsa)) result.obsa.income_variance = *var;
  }
  return result;
}

Scenario4Result run_scenario4(const Config& cfg) {
  cfg.validate();
  Scenario4Result result;
  result.obsa_participants.resize(static_cast<std::size_t>(cfg.horizon));
  result.baseline_participants.resize(static_cast<std::size_t>(cfg.horizon));

  std::mt19937_64 rng(derive_seed(cfg.seed, 0x5C4));
  std::poisson_distribution<int> arrivals(cfg.arrival_mean);
  long pending = 0;
  for (long t = 0; t < cfg.horizon; ++t) {
    const int n = arrivals(rng);
    std::binomial_distribution<int> informed_draw(n, cfg.informed_fraction);
    const int informed = n > 0 ? informed_draw(rng) : 0;
    result.obsa_participants[static_cast<std::size_t>(t)] = n;
    if (t % cfg.low_period == 0) {
      // Low-price instant: deferred informed entrants flush in.
      result.baseline_participants[static_cast<std::size_t>(t)] = n + pending;
      pending = 0;
    } else {
      result.baseline_participants[static_cast<std::size_t>(t)] = n - informed;
      pending += informed;
    }
  }
  return result;
}

}  // namespace ccn
