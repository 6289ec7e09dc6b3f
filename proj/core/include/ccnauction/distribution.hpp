#pragma once

#include <optional>
#include <random>
#include <vector>

#include "ccnauction/grid.hpp"

namespace ccn {

// Parameters of the concatenated sampled Laplace law: a continuous
// Laplace(mu, w) density sampled at the grid points and renormalized so the
// resulting pmf over indices 0..L sums to one. mu must sit on the grid,
// mu = v_min + beta * delta.
struct SampledLaplaceParams {
  BidGrid grid;
  double mu;
  double w;
  int beta;

  SampledLaplaceParams(const BidGrid& g, double mu_, double w_);
};

// Normalization factor Gamma: with it, sum_k (1/Gamma)(1/2w) e^{-|v_k - mu|/w} = 1.
// Evaluated in closed form via the two geometric tails around beta.
double laplace_normalizer(const SampledLaplaceParams& p);

enum class BidLaw { Uniform, SampledLaplace };

// A bid distribution over a BidGrid: either discrete uniform over the grid
// points or a concatenated sampled Laplace.
class BidDistribution {
public:
  static BidDistribution uniform(const BidGrid& grid);
  static BidDistribution sampled_laplace(const SampledLaplaceParams& p);

  BidLaw kind() const { return kind_; }
  const BidGrid& grid() const { return grid_; }
  const std::optional<SampledLaplaceParams>& laplace() const { return laplace_; }

  // pmf at grid index k, k in 0..L.
  double pmf(int k) const;
  // cdf at (possibly out-of-range) index k: 0 for k < 0, 1 for k > L.
  double cdf(int k) const;

  // Draws a grid index by cdf inversion.
  int sample_index(std::mt19937_64& rng) const;
  double sample_value(std::mt19937_64& rng) const;

private:
  BidDistribution(BidLaw kind, const BidGrid& grid,
                  std::optional<SampledLaplaceParams> laplace);

  BidLaw kind_;
  BidGrid grid_;
  std::optional<SampledLaplaceParams> laplace_;
  double gamma_ = 0.0;           // Laplace normalizer
  std::vector<double> cum_;      // cdf table for sampling
};

// Poisson-distributed number of auction participants with mean lambda.
struct ParticipationModel {
  double lambda;

  explicit ParticipationModel(double lambda_) : lambda(lambda_) {
    if (lambda < 0.0) throw std::invalid_argument("ParticipationModel: lambda must be >= 0");
  }
};

// e^{-lambda} lambda^n / n!, evaluated in log space.
double poisson_pmf(double lambda, int n);

// Probability that an auction with a Poisson(lambda) number of bidders, each
// bidding iid from d, clears with the highest bid at grid index y, counting
// only auctions with at least min_bidders participants (min_bidders in {1,2}).
double max_bid_pmf(const BidDistribution& d, const ParticipationModel& pm,
                   int y, int min_bidders);

}  // namespace ccn
