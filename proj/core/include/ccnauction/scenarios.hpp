#pragma once

#include <optional>
#include <vector>

#include "ccnauction/chain.hpp"
#include "ccnauction/config.hpp"
#include "ccnauction/hjb.hpp"

namespace ccn {

struct MetricsReport {
  double mean_income = 0.0;
  double income_variance = 0.0;
  long total_winners = 0;
  long total_sold = 0;
  std::vector<long> participants;            // one entry per time instant
  std::vector<std::vector<double>> payments; // sorted per replication / cell
};

// Unbiased sample variance over all recorded payments; absent below 2 samples.
std::optional<double> payment_variance(const MetricsReport& report);

// Final payments of `reps` entering winners under the OBSA market, each from
// its own derived seed (sorted ascending, order-insensitive aggregation).
std::vector<double> obsa_final_payments(const BidDistribution& bids, double lambda,
                                        long delta, double pB, Mechanism mechanism,
                                        long reps, std::uint64_t seed);

// Winner payments of `reps` plain pay-bid rounds with Poisson(lambda) bidders
// (empty rounds skipped), the degenerate single-item combinatorial baseline.
std::vector<double> baseline_winner_payments(const BidDistribution& bids, double lambda,
                                             long reps, std::uint64_t seed);

struct Scenario1Row {
  double lambda = 0.0;
  long delta = 0;
  double analytic = 0.0;
  double simulated = 0.0;
  double stderr_ = 0.0;
};

struct Scenario1Result {
  std::vector<Scenario1Row> rows;  // lambda-major, delta-minor
  MetricsReport report;            // payments hold one sorted list per row
};

// Analytic-versus-simulated expected income over the (lambda, delta) grid.
Scenario1Result run_scenario1(const Config& cfg, Mechanism mechanism);

struct Scenario2Result {
  std::vector<double> gammas;
  std::vector<BidCurve> curves;  // aligned with gammas
};

// Bid curves over the configured gamma sweep; verifies each curve starts at
// varpi, decreases, and that larger gamma lies uniformly below.
Scenario2Result run_scenario2(const Config& cfg);

struct Scenario3Result {
  MetricsReport obsa;
  MetricsReport baseline;
};

// Per-type sequential unit auctions with price floors (OBSA side) against the
// greedy all-or-nothing combinatorial baseline, over identical demand draws.
Scenario3Result run_scenario3(const Config& cfg);

struct Scenario4Result {
  std::vector<long> obsa_participants;
  std::vector<long> baseline_participants;
};

// Delayed-entrance experiment: informed entrants defer to the periodic
// low-price instants under the baseline and enter immediately under OBSA.
Scenario4Result run_scenario4(const Config& cfg);

}  // namespace ccn
