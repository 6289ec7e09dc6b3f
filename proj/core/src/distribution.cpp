#include "ccnauction/distribution.hpp"

#include <algorithm>
#include <cmath>

namespace ccn {

SampledLaplaceParams::SampledLaplaceParams(const BidGrid& g, double mu_, double w_)
    : grid(g), mu(mu_), w(w_) {
  if (!(w > 0.0)) throw std::invalid_argument("SampledLaplaceParams: w must be > 0");
  const double steps = (mu - g.v_min()) / g.delta();
  beta = static_cast<int>(std::llround(steps));
  if (beta < 0 || beta > g.levels() ||
      std::abs(g.value(beta) - mu) > 1e-9 * g.delta())
    throw std::invalid_argument("SampledLaplaceParams: mu must lie on the grid");
}

double laplace_normalizer(const SampledLaplaceParams& p) {
  const double d = p.grid.delta(), w = p.w;
  const int K = p.grid.levels(), beta = p.beta;
  // Geometric sums of e^{-|v_k - mu|/w} below and above beta, plus the peak.
  const double below = std::exp(-d / w) * (1.0 - std::exp(-beta * d / w)) /
                       (1.0 - std::exp(-d / w));
  const double above = std::exp(-d / w) * (1.0 - std::exp(-(K - beta) * d / w)) /
                       (1.0 - std::exp(-d / w));
  return (below + above + 1.0) / (2.0 * w);
}

BidDistribution::BidDistribution(BidLaw kind, const BidGrid& grid,
                                 std::optional<SampledLaplaceParams> laplace)
    : kind_(kind), grid_(grid), laplace_(std::move(laplace)) {
  if (kind_ == BidLaw::SampledLaplace) gamma_ = laplace_normalizer(*laplace_);
  cum_.resize(static_cast<size_t>(grid_.size()));
  double acc = 0.0;
  for (int k = 0; k <= grid_.levels(); ++k) {
    acc += pmf(k);
    cum_[static_cast<size_t>(k)] = acc;
  }
  cum_.back() = 1.0;
}

BidDistribution BidDistribution::uniform(const BidGrid& grid) {
  return BidDistribution(BidLaw::Uniform, grid, std::nullopt);
}

BidDistribution BidDistribution::sampled_laplace(const SampledLaplaceParams& p) {
  return BidDistribution(BidLaw::SampledLaplace, p.grid, p);
}

double BidDistribution::pmf(int k) const {
  if (k < 0 || k > grid_.levels())
    throw std::out_of_range("BidDistribution::pmf: index outside 0..L");
  if (kind_ == BidLaw::Uniform) return 1.0 / grid_.size();
  const auto& p = *laplace_;
  return std::exp(-std::abs(grid_.value(k) - p.mu) / p.w) / (2.0 * p.w * gamma_);
}

double BidDistribution::cdf(int k) const {
  if (k < 0) return 0.0;
  if (k >= grid_.levels()) return 1.0;
  if (kind_ == BidLaw::Uniform)
    return static_cast<double>(k + 1) / grid_.size();
  // Five-branch closed form for the concatenated sampled Laplace cdf.
  const auto& p = *laplace_;
  const double d = grid_.delta(), w = p.w;
  const int beta = p.beta;
  const double scale = 1.0 / (2.0 * w * gamma_);
  const double head = std::exp((grid_.v_min() - p.mu) / w);
  if (k < beta)
    return scale * head * (1.0 - std::exp(d * (k + 1) / w)) / (1.0 - std::exp(d / w));
  const double up_to_beta =
      head * (1.0 - std::exp(d * beta / w)) / (1.0 - std::exp(d / w)) + 1.0;
  if (k == beta) return scale * up_to_beta;
  return scale * (up_to_beta + std::exp(-d / w) *
                                   (1.0 - std::exp(-d * (k - beta) / w)) /
                                   (1.0 - std::exp(-d / w)));
}

int BidDistribution::sample_index(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
  if (it == cum_.end()) --it;
  return static_cast<int>(it - cum_.begin());
}

double BidDistribution::sample_value(std::mt19937_64& rng) const {
  return grid_.value(sample_index(rng));
}

double poisson_pmf(double lambda, int n) {
  if (lambda < 0.0 || n < 0) throw std::invalid_argument("poisson_pmf: bad arguments");
  if (lambda == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(-lambda + n * std::log(lambda) - std::lgamma(n + 1.0));
}

double max_bid_pmf(const BidDistribution& d, const ParticipationModel& pm,
                   int y, int min_bidders) {
  if (y < 0 || y > d.grid().levels())
    throw std::out_of_range("max_bid_pmf: y outside 0..L");
  if (min_bidders != 1 && min_bidders != 2)
    throw std::invalid_argument("max_bid_pmf: min_bidders must be 1 or 2");
  const double lambda = pm.lambda;
  if (lambda == 0.0) return 0.0;
  const double fy = d.cdf(y), fy1 = d.cdf(y - 1);
  // sum_{N>=1} pois(N) [F(y)^N - F(y-1)^N] in closed form; the N = 0 term
  // vanishes, so the sum over N >= 0 gives the same value.
  double p = std::exp(-lambda) * (std::exp(lambda * fy) - std::exp(lambda * fy1));
  if (min_bidders == 2) p -= lambda * std::exp(-lambda) * (fy - fy1);
  return p;
}

}  // namespace ccn
