#include "ccnauction/hjb.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ccn {

void StageTwoParams::validate() const {
  if (!(0.0 < a && a < z && z < varpi))
    throw std::invalid_argument("StageTwoParams: need 0 < a < z < varpi");
  if (!(0.0 < q && q < z))
    throw std::invalid_argument("StageTwoParams: need 0 < q < z");
  if (gamma < 0.0 || lambdaA < 0.0 || lambdaCCN < 0.0 || lambdaCP < 0.0)
    throw std::invalid_argument("StageTwoParams: rates must be >= 0");
  if (mu_active < 0.0 || mu_active > 1.0)
    throw std::invalid_argument("StageTwoParams: mu_active must be in [0,1]");
  if (!(Tp > 0.0)) throw std::invalid_argument("StageTwoParams: Tp must be > 0");
}

double reciprocal_cdf(double x, double lo, double hi) {
  if (!(0.0 < lo && lo < hi))
    throw std::invalid_argument("reciprocal_cdf: need 0 < lo < hi");
  if (x <= lo) return 0.0;
  if (x >= hi) return 1.0;
  return (std::log(x) - std::log(lo)) / (std::log(hi) - std::log(lo));
}

double reciprocal_pdf(double x, double lo, double hi) {
  if (!(0.0 < lo && lo < hi))
    throw std::invalid_argument("reciprocal_pdf: need 0 < lo < hi");
  if (x < lo || x > hi) return 0.0;
  return 1.0 / (x * (std::log(hi) - std::log(lo)));
}

double first_price_bid(const StageTwoParams& p, double r) {
  p.validate();
  if (r < 0.0 || r > p.Tp)
    throw std::out_of_range("first_price_bid: r outside [0, Tp]");
  return p.varpi * std::exp(-p.gamma * r);
}

namespace {

struct OdeTerms {
  double La;     // ln z - ln a
  double Lq;     // ln z - ln q
  double alpha;  // lambdaCCN / La
  double beta;   // lambdaCP / Lq
  double A;      // e^{lambdaCCN (F(s) - 1)} = A s^alpha
  double B;      // e^{lambdaCP (G(s) - 1)} = B s^beta
  double D;      // lambdaCCN + La
  double mlA;    // mu lambdaA
};

OdeTerms ode_terms(const StageTwoParams& p) {
  OdeTerms t;
  t.La = std::log(p.z) - std::log(p.a);
  t.Lq = std::log(p.z) - std::log(p.q);
  t.alpha = p.lambdaCCN / t.La;
  t.beta = p.lambdaCP / t.Lq;
  t.A = std::exp(-p.lambdaCCN) * std::exp(-p.lambdaCCN * std::log(p.a) / t.La);
  t.B = std::exp(-p.lambdaCP) * std::exp(-p.lambdaCP * std::log(p.q) / t.Lq);
  t.D = p.lambdaCCN + t.La;
  t.mlA = p.mu_active * p.lambdaA;
  return t;
}

}  // namespace

OdeConstants ode_constants(const StageTwoParams& p) {
  p.validate();
  const OdeTerms t = ode_terms(p);
  OdeConstants c;
  c.c1 = t.mlA * t.A * t.B * (p.lambdaCCN / t.D - 1.0);
  c.c2 = t.alpha + t.beta + 1.0;
  c.c3 = -p.gamma * t.B;
  c.c4 = t.beta + 1.0;
  c.c5 = t.mlA * t.A * (1.0 - p.lambdaCCN / t.D);
  c.c6 = t.alpha + 1.0;
  c.c7 = p.gamma;
  return c;
}

BidCurve solve_second_price_curve(const StageTwoParams& p, double h) {
  p.validate();
  if (!(h > 0.0)) throw std::invalid_argument("solve_second_price_curve: h must be > 0");
  const long n = std::lround(p.Tp / h);
  if (n < 1 || std::abs(n * h - p.Tp) > 1e-9 * p.Tp)
    throw std::invalid_argument("solve_second_price_curve: h must divide Tp");

  const OdeConstants c = ode_constants(p);
  const double gu = p.gamma * p.u;
  auto f = [&](double r, double y) {
    const double yp = std::max(y, 0.0);
    return -gu * std::exp(-p.gamma * r) - c.c7 * y -
           c.c1 * std::pow(yp, c.c2) - c.c5 * std::pow(yp, c.c6);
  };

  BidCurve curve;
  curve.step = h;
  curve.params = p;
  curve.values.reserve(static_cast<std::size_t>(n) + 1);
  curve.values.push_back(p.varpi);

  double y = p.varpi;
  for (long i = 0; i < n; ++i) {
    if (curve.clamped_from) {
      curve.values.push_back(0.0);
      continue;
    }
    const double r = i * h;
    const double k1 = f(r, y);
    const double k2 = f(r + 0.5 * h, y + 0.5 * h * k1);
    const double k3 = f(r + 0.5 * h, y + 0.5 * h * k2);
    const double k4 = f(r + h, y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(y)) {
      std::ostringstream os;
      os << "solve_second_price_curve: non-finite solution at r = " << r + h;
      throw std::runtime_error(os.str());
    }
    if (y > p.varpi * (1.0 + 1e-9)) {
      std::ostringstream os;
      os << "solve_second_price_curve: solution exceeds varpi at r = " << r + h;
      throw std::runtime_error(os.str());
    }
    if (y <= 0.0) {
      y = 0.0;
      curve.clamped_from = curve.values.size();
    }
    curve.values.push_back(y);
  }
  return curve;
}

ResidualSample integro_diff_residual(const BidCurve& curve, std::size_t i) {
  const std::size_t n = curve.size();
  if (n < 3) throw std::invalid_argument("integro_diff_residual: curve too short");
  if (i >= n) throw std::out_of_range("integro_diff_residual: index outside curve");

  const StageTwoParams& p = curve.params;
  const OdeTerms t = ode_terms(p);
  const double h = curve.step;
  const auto& v = curve.values;

  ResidualSample out;
  double yp;
  if (i == 0) {
    yp = (v[1] - v[0]) / h;
    out.one_sided = true;
  } else if (i == n - 1) {
    yp = (v[n - 1] - v[n - 2]) / h;
    out.one_sided = true;
  } else {
    yp = (v[i + 1] - v[i - 1]) / (2.0 * h);
  }

  const double y = v[i];
  // e^{lambdaCCN (F(y)-1)} and the CP no-lower-offer complement.
  const double eF = t.A * std::pow(y, t.alpha);
  const double cp = 1.0 - t.B * std::pow(y, t.beta);

  // Integral of e^{lambdaCCN (F(s)-1)} s F'(s) ds from a up to b(r): closed
  // form A s^{alpha+1} / D on the stub below the curve's reach, trapezoid on
  // the curve samples above it.
  auto g = [&](double s) { return t.A * std::pow(s, t.alpha) / t.La; };
  const double tail = v.back();
  double integral =
      t.A * (std::pow(tail, t.alpha + 1.0) - std::pow(p.a, t.alpha + 1.0)) / t.D;
  for (std::size_t j = n - 1; j > i; --j)
    integral += 0.5 * (v[j - 1] - v[j]) * (g(v[j - 1]) + g(v[j]));

  out.value = y * (-p.gamma - t.mlA * eF * cp) - yp +
              t.mlA * p.lambdaCCN * cp * integral -
              p.gamma * p.u * std::exp(-p.gamma * curve.r(i));
  return out;
}

std::vector<double> expected_utility_curve(const StageTwoParams& p,
                                           const BidCurve& curve) {
  std::vector<double> d(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i)
    d[i] = std::exp(-p.gamma * curve.r(i)) * p.u - curve.values[i];
  return d;
}

std::string format_curve(const BidCurve& curve) {
  std::ostringstream os;
  os.precision(12);
  for (std::size_t i = 0; i < curve.size(); ++i)
    os << curve.r(i) << ' ' << curve.values[i] << '\n';
  return os.str();
}

}  // namespace ccn
