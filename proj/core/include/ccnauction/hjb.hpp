#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ccn {

// Stage-two market parameters: a CCN manager gathering resources from CPs,
// with a flat-price fallback varpi once the participation window Tp runs out.
// Bids live on [a, z] with the reciprocal law; q is the offered-price support
// lower bound (defaults to a).
struct StageTwoParams {
  double u = 0.0;          // instant utility per time unit
  double gamma = 0.0;      // rate of time preference
  double varpi = 0.0;      // flat price
  double mu_active = 0.0;  // active-bidder fraction
  double lambdaA = 0.0;    // auction rate
  double lambdaCCN = 0.0;  // mean competing CCN managers per auction
  double lambdaCP = 0.0;   // mean CPs per auction
  double Tp = 0.0;         // participation window
  double a = 0.0;          // bid support lower bound
  double z = 0.0;          // bid support upper bound
  double q = 0.0;          // offered-price support lower bound

  void validate() const;
};

struct OdeConstants {
  double c1, c2, c3, c4, c5, c6, c7;
};

// Sampled bid-versus-residual-time curve, values[i] ~ b*(i * step).
struct BidCurve {
  double step = 0.0;
  std::vector<double> values;
  StageTwoParams params;
  // First index clamped to zero when the solution crossed below zero.
  std::optional<std::size_t> clamped_from;

  std::size_t size() const { return values.size(); }
  double r(std::size_t i) const { return static_cast<double>(i) * step; }
};

// Reciprocal (log-uniform) bid law on [lo, hi]: pdf 1/(x (ln hi - ln lo)).
double reciprocal_cdf(double x, double lo, double hi);
double reciprocal_pdf(double x, double lo, double hi);

// First-price closed form b*(r) = varpi e^{-gamma r}.
double first_price_bid(const StageTwoParams& p, double r);

// Constants of the reciprocal-law first-order ODE
//   y' + c1 y^{c2} + c3 y^{c4} + c5 y^{c6} + c7 y = -gamma u e^{-gamma r},
// in the b(T) -> a -> 0 limit. The c3 term cancels against the matching
// expansion term and is reported for completeness only.
OdeConstants ode_constants(const StageTwoParams& p);

// Integrates the ODE from y(0) = varpi to r = Tp with classical fixed-step
// RK4. h must divide Tp. A solution exceeding varpi aborts; one crossing zero
// is clamped at zero from the first crossing (clamped_from records where).
BidCurve solve_second_price_curve(const StageTwoParams& p, double h);

struct ResidualSample {
  double value = 0.0;
  bool one_sided = false;  // endpoint derivative fell back to one-sided
};

// Residual of the integro-differential bid equation at grid point i, with
// b'(r) from centered differences and the bid integral by trapezoid
// quadrature along the curve (closed form on the sub-curve stub [a, b(Tp)]).
ResidualSample integro_diff_residual(const BidCurve& curve, std::size_t i);

// D[i] = e^{-gamma i h} u - b[i]; D[0] = u - varpi.
std::vector<double> expected_utility_curve(const StageTwoParams& p,
                                           const BidCurve& curve);

// Two-column numeric text (r, b*(r)).
std::string format_curve(const BidCurve& curve);

}  // namespace ccn
