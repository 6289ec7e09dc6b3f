#pragma once

#include <Eigen/Dense>
#include <iosfwd>

#include "ccnauction/distribution.hpp"
#include "ccnauction/obsa.hpp"

namespace ccn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Exact Markov-chain model of the price-matching process on a bid grid.
// States are payment levels 0..L. P drives the first-price chain (and the
// second-price sub-chains); Q and Z split the second-price primary chain into
// bumped-stays and bumped-leaves branches, so Q + Z is row stochastic.
struct ChainModel {
  BidGrid grid;
  Matrix P;       // first-price transitions, lower triangular
  Matrix Q;       // second-price primary transitions (bumped stays)
  Matrix Z;       // departures into the first-price sub-chains
  Vector pi0;     // first-price entering distribution (max-bid law, >=1 bidder)
  Vector Pi0;     // second-price entering distribution (second-highest law, >=2 bidders)
  double pB;      // bumped-agent per-round survival probability
  double lambda;
};

ChainModel build_chain(const BidDistribution& d, double lambda, double pB);

// Distribution of the payment state after Delta observed rounds, one row per
// entering state. First price: P^Delta. Second price:
//   Theta = Q^Delta + sum_{k=1..Delta} Q^{Delta-k} Z P^{k-1}.
Matrix leaving_probabilities(const ChainModel& m, Mechanism mechanism, long delta);

// Expected final payment in money units, sum_i sum_{j<=i} (v_min + j*delta)
// Theta_ij (entering)_i.
double expected_revenue(const ChainModel& m, Mechanism mechanism, long delta);

// Same expectation in grid-index units (no v_min offset), for debugging.
double expected_payment_index(const ChainModel& m, Mechanism mechanism, long delta);

// Truncated-path lower bound on the first-price expected revenue. Order 1
// keeps the stay-put and single-hop transition paths; order 2 adds the
// two-hop paths. Always <= expected_revenue.
double revenue_lower_bound_first(const ChainModel& m, long delta, int order);

struct HittingTimes {
  Vector k;    // sub-chain / first-price mean hitting times of the target state
  Vector rho;  // second-price primary-chain mean hitting times (empty for first price)
  double P0;   // expected absorption time from the entering distribution
};

// Mean hitting times of `target` (default state 0) by forward substitution on
// the lower-triangular linear systems. States that cannot reach the target
// report an infinite hitting time.
HittingTimes hitting_times(const ChainModel& m, Mechanism mechanism, int target = 0);

struct PatienceCap {
  long delta_max;
  bool feasible;  // false when the cap is 0
};

// Patience-time cap floor(P0 / m) guaranteeing the manager a profit margin.
PatienceCap max_patience(double P0, int m);

// Structured text dump (matrix rows as space-delimited numeric lines) for
// golden-file comparison.
void dump_chain(std::ostream& os, const ChainModel& m);

}  // namespace ccn
