#include <doctest.h>

#include <cmath>
#include <random>

#include "ccnauction/distribution.hpp"

using namespace ccn;

namespace {

BidGrid table1_grid() { return BidGrid(48.0, 312.0, 1.0); }

BidDistribution table1_laplace() {
  return BidDistribution::sampled_laplace(SampledLaplaceParams(table1_grid(), 70.0, 50.0));
}

// Generic Poisson-mixture form of the max-bid law, truncated at tail mass
// below 1e-12, written independently of the closed form under test.
double max_pmf_oracle(const BidDistribution& d, double lambda, int y, int min_bidders) {
  double total = 0.0, tail = 1.0;
  for (int n = 0; n < min_bidders; ++n) tail -= poisson_pmf(lambda, n);
  int n = min_bidders;
  const double fy = d.cdf(y), fy1 = d.cdf(y - 1);
  while (tail > 1e-12 && n < 100000) {
    const double pn = poisson_pmf(lambda, n);
    total += pn * (std::pow(fy, n) - std::pow(fy1, n));
    tail -= pn;
    ++n;
  }
  return total;
}

}  // namespace

TEST_CASE("bid grid validates and indexes") {
  const BidGrid g = table1_grid();
  CHECK(g.levels() == 264);
  CHECK(g.size() == 265);
  CHECK(g.value(0) == 48.0);
  CHECK(g.value(264) == 312.0);
  CHECK_THROWS_AS(BidGrid(0.0, 10.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(BidGrid(10.0, 10.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(BidGrid(0.0, 10.5, 1.0), std::invalid_argument);
}

TEST_CASE("laplace normalizer equals brute-force summation on table-1 parameters") {
  const SampledLaplaceParams p(table1_grid(), 70.0, 50.0);
  // Direct oracle: Gamma such that sum (1/Gamma)(1/2w) e^{-|x-mu|/w} = 1.
  double s = 0.0;
  for (int x = 48; x <= 312; ++x) s += std::exp(-std::abs(x - 70.0) / 50.0) / 100.0;
  CHECK(laplace_normalizer(p) == doctest::Approx(s).epsilon(1e-12));
}

TEST_CASE("laplace normalizer symmetric case has equal tails") {
  const BidGrid g(0.0, 10.0, 1.0);
  const SampledLaplaceParams p(g, 5.0, 2.0);
  const BidDistribution d = BidDistribution::sampled_laplace(p);
  for (int j = 0; j <= 5; ++j)
    CHECK(d.pmf(5 + j) == doctest::Approx(d.pmf(5 - j)).epsilon(1e-14));
  double s = 0.0;
  for (int x = 0; x <= 10; ++x) s += std::exp(-std::abs(x - 5.0) / 2.0) / 4.0;
  CHECK(laplace_normalizer(p) == doctest::Approx(s).epsilon(1e-12));
}

TEST_CASE("laplace parameter validation") {
  CHECK_THROWS_AS(SampledLaplaceParams(table1_grid(), 70.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SampledLaplaceParams(table1_grid(), 70.5, 50.0), std::invalid_argument);
  CHECK_THROWS_AS(SampledLaplaceParams(table1_grid(), 47.0, 50.0), std::invalid_argument);
}

TEST_CASE("pmf sums to one and peaks at beta") {
  const BidDistribution lap = table1_laplace();
  const BidDistribution uni = BidDistribution::uniform(table1_grid());
  double sl = 0.0, su = 0.0;
  for (int k = 0; k <= 264; ++k) {
    sl += lap.pmf(k);
    su += uni.pmf(k);
  }
  CHECK(sl == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(su == doctest::Approx(1.0).epsilon(1e-12));
  const int beta = lap.laplace()->beta;
  CHECK(beta == 22);
  for (int k = 0; k <= 264; ++k) CHECK(lap.pmf(k) <= lap.pmf(beta));
  CHECK_THROWS_AS(lap.pmf(-1), std::out_of_range);
  CHECK_THROWS_AS(lap.pmf(265), std::out_of_range);
}

TEST_CASE("cdf matches the cumulative-sum oracle and boundary branches") {
  for (const BidDistribution& d :
       {table1_laplace(), BidDistribution::uniform(table1_grid())}) {
    CHECK(d.cdf(-1) == 0.0);
    CHECK(d.cdf(-7) == 0.0);
    CHECK(d.cdf(265) == 1.0);
    CHECK(d.cdf(264) == 1.0);
    double cum = 0.0, prev = 0.0;
    for (int k = 0; k <= 264; ++k) {
      cum += d.pmf(k);
      CHECK(d.cdf(k) == doctest::Approx(cum).epsilon(1e-12));
      CHECK(d.cdf(k) >= prev);
      prev = d.cdf(k);
    }
  }
}

TEST_CASE("poisson pmf") {
  CHECK(poisson_pmf(0.0, 0) == 1.0);
  CHECK(poisson_pmf(0.0, 3) == 0.0);
  // Independent log-gamma transcription at lambda = 93.
  const double oracle = std::exp(93.0 * std::log(93.0) - std::lgamma(94.0) - 93.0);
  CHECK(poisson_pmf(93.0, 93) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK_THROWS_AS(poisson_pmf(-1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(poisson_pmf(1.0, -1), std::invalid_argument);
}

TEST_CASE("max bid pmf closed form") {
  const BidDistribution uni = BidDistribution::uniform(table1_grid());
  const ParticipationModel pm(10.0);

  SUBCASE("lambda = 0 vanishes") {
    const ParticipationModel none(0.0);
    for (int y : {0, 10, 264}) CHECK(max_bid_pmf(uni, none, y, 1) == 0.0);
  }

  SUBCASE("uniform closed form of the paper") {
    const int L1 = 265;  // L + 1 grid points
    for (int y : {0, 1, 50, 200, 264}) {
      const double expect = std::exp(-10.0) * (std::exp((y + 1) * 10.0 / L1) -
                                               std::exp(y * 10.0 / L1));
      CHECK(max_bid_pmf(uni, pm, y, 1) == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  SUBCASE("generic truncated mixture oracle") {
    for (const BidDistribution& d :
         {BidDistribution::uniform(table1_grid()), table1_laplace()}) {
      for (double lambda : {0.5, 2.0, 10.0}) {
        for (int mb : {1, 2}) {
          for (int y : {0, 3, 100, 264}) {
            const double got = max_bid_pmf(d, ParticipationModel(lambda), y, mb);
            CHECK(got == doctest::Approx(max_pmf_oracle(d, lambda, y, mb)).epsilon(1e-10));
          }
        }
      }
    }
  }

  SUBCASE("mass accounting: sum over y plus no-auction probability is 1") {
    for (int mb : {1, 2}) {
      double total = 0.0;
      for (int y = 0; y <= 264; ++y) total += max_bid_pmf(uni, pm, y, mb);
      const double no_auction =
          mb == 1 ? poisson_pmf(10.0, 0) : poisson_pmf(10.0, 0) + poisson_pmf(10.0, 1);
      CHECK(total + no_auction == doctest::Approx(1.0).epsilon(1e-10));
    }
  }

  SUBCASE("Monte Carlo frequency oracle") {
    const BidDistribution lap = table1_laplace();
    const double lambda = 4.0;
    const int reps = 1000000;
    std::mt19937_64 rng(12345);
    std::poisson_distribution<int> pois(lambda);
    std::vector<long> hits1(265, 0), hits2(265, 0);
    for (int r = 0; r < reps; ++r) {
      const int n = pois(rng);
      int best = -1;
      for (int i = 0; i < n; ++i) best = std::max(best, lap.sample_index(rng));
      if (n >= 1) ++hits1[static_cast<std::size_t>(best)];
      if (n >= 2) ++hits2[static_cast<std::size_t>(best)];
    }
    for (int y : {20, 22, 30, 60}) {
      for (int mb : {1, 2}) {
        const double p = max_bid_pmf(lap, ParticipationModel(lambda), y, mb);
        const double freq = static_cast<double>(mb == 1 ? hits1[y] : hits2[y]) / reps;
        const double se = std::sqrt(p * (1.0 - p) / reps);
        CHECK(std::abs(freq - p) < 3.0 * se);
      }
    }
  }

  CHECK_THROWS_AS(max_bid_pmf(uni, pm, -1, 1), std::out_of_range);
  CHECK_THROWS_AS(max_bid_pmf(uni, pm, 0, 3), std::invalid_argument);
}

TEST_CASE("sampling matches the pmf") {
  const BidDistribution lap = table1_laplace();
  std::mt19937_64 rng(99);
  const int reps = 200000;
  std::vector<long> hits(265, 0);
  for (int r = 0; r < reps; ++r) ++hits[static_cast<std::size_t>(lap.sample_index(rng))];
  for (int y : {0, 22, 40, 150}) {
    const double p = lap.pmf(y);
    const double se = std::sqrt(p * (1.0 - p) / reps);
    CHECK(std::abs(static_cast<double>(hits[y]) / reps - p) < 4.0 * se);
  }
}
