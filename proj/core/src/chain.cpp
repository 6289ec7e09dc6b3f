#include "ccnauction/chain.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace ccn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// sum_{n>=2} pois(n; lambda) u^{n-1} = (e^{lambda u} - 1 - lambda u) / u.
double tail2(double lambda, double u) {
  if (u <= 0.0) return 0.0;
  return (std::expm1(lambda * u) - lambda * u) / u;
}

Matrix matrix_power(Matrix base, long e) {
  Matrix acc = Matrix::Identity(base.rows(), base.cols());
  while (e > 0) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return acc;
}

}  // namespace

ChainModel build_chain(const BidDistribution& d, double lambda, double pB) {
  if (!(lambda > 0.0)) throw std::invalid_argument("build_chain: lambda must be > 0");
  if (pB < 0.0 || pB > 1.0) throw std::invalid_argument("build_chain: pB must be in [0,1]");

  const int n = d.grid().size();
  ChainModel m{d.grid(), Matrix::Zero(n, n), Matrix::Zero(n, n), Matrix::Zero(n, n),
               Vector::Zero(n), Vector::Zero(n), pB, lambda};

  const ParticipationModel pm(lambda);
  const double el = std::exp(-lambda);

  // Law of the round maximum over >=1 Poisson bidders, and of the maximum over
  // the bidders other than a living bumped agent (>=2 participants in total).
  Vector max1(n), max_excl(n);
  for (int y = 0; y < n; ++y) {
    max1(y) = max_bid_pmf(d, pm, y, 1);
    max_excl(y) = el * (tail2(lambda, d.cdf(y)) - tail2(lambda, d.cdf(y - 1)));
  }

  for (int x = 0; x < n; ++x) {
    double below1 = 0.0, below_excl = 0.0;
    for (int y = 0; y < x; ++y) {
      m.P(x, y) = max1(y);
      m.Q(x, y) = pB * max_excl(y);
      m.Z(x, y) = (1.0 - pB) * max1(y);
      below1 += max1(y);
      below_excl += max_excl(y);
    }
    m.P(x, x) = 1.0 - below1;
    m.Q(x, x) = pB * (1.0 - below_excl);
    m.Z(x, x) = (1.0 - pB) * (1.0 - below1);
  }

  // Entering laws: highest bid given >=1 bidders; second-highest given >=2.
  const double norm2 = 1.0 - el * (1.0 + lambda);
  auto second_tail = [&](double F) {
    // sum_{n>=2} pois(n) P(second-highest of n iid <= value with cdf F)
    return el * (std::expm1(lambda * F) - lambda * F +
                 lambda * (1.0 - F) * std::expm1(lambda * F));
  };
  double prev = 0.0;
  for (int y = 0; y < n; ++y) {
    m.pi0(y) = max1(y) / (1.0 - el);
    const double cur = second_tail(d.cdf(y));
    m.Pi0(y) = (cur - prev) / norm2;
    prev = cur;
  }
  return m;
}

Matrix leaving_probabilities(const ChainModel& m, Mechanism mechanism, long delta) {
  if (delta < 0) throw std::invalid_argument("leaving_probabilities: delta must be >= 0");
  const int n = m.grid.size();
  if (mechanism == Mechanism::FirstPrice) return matrix_power(m.P, delta);

  // Block power of [[Q, Z], [0, P]]; the top row of the result is
  // [Q^D, sum_k Q^{D-k} Z P^{k-1}], and the observer's payment law is the sum
  // of the two blocks (still in the primary chain, or departed into a
  // sub-chain).
  Matrix block = Matrix::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = m.Q;
  block.topRightCorner(n, n) = m.Z;
  block.bottomRightCorner(n, n) = m.P;
  const Matrix pw = matrix_power(block, delta);
  return pw.topLeftCorner(n, n) + pw.topRightCorner(n, n);
}

double expected_revenue(const ChainModel& m, Mechanism mechanism, long delta) {
  const Matrix theta = leaving_probabilities(m, mechanism, delta);
  const Vector& enter = mechanism == Mechanism::FirstPrice ? m.pi0 : m.Pi0;
  double total = 0.0;
  for (int i = 0; i < m.grid.size(); ++i)
    for (int j = 0; j <= i; ++j)
      total += enter(i) * theta(i, j) * m.grid.value(j);
  return total;
}

double expected_payment_index(const ChainModel& m, Mechanism mechanism, long delta) {
  const Matrix theta = leaving_probabilities(m, mechanism, delta);
  const Vector& enter = mechanism == Mechanism::FirstPrice ? m.pi0 : m.Pi0;
  double total = 0.0;
  for (int i = 0; i < m.grid.size(); ++i)
    for (int j = 0; j <= i; ++j)
      total += enter(i) * theta(i, j) * j;
  return total;
}

double revenue_lower_bound_first(const ChainModel& m, long delta, int order) {
  if (delta < 0) throw std::invalid_argument("revenue_lower_bound_first: delta must be >= 0");
  if (order != 1 && order != 2)
    throw std::invalid_argument("revenue_lower_bound_first: order must be 1 or 2");

  const int n = m.grid.size();
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    if (m.pi0(i) == 0.0) continue;
    // Paths that never move.
    double bound = m.grid.value(i) * std::pow(m.P(i, i), static_cast<double>(delta));
    // Paths with exactly one downward hop i -> j.
    if (delta >= 1) {
      for (int j = 0; j < i; ++j) {
        if (m.P(i, j) == 0.0) continue;
        double stays = 0.0;
        for (long c = 0; c < delta; ++c)
          stays += std::pow(m.P(i, i), static_cast<double>(c)) *
                   std::pow(m.P(j, j), static_cast<double>(delta - 1 - c));
        bound += m.grid.value(j) * m.P(i, j) * stays;
      }
    }
    // Paths with exactly two hops i -> j -> k.
    if (order == 2 && delta >= 2) {
      for (int j = 0; j < i; ++j) {
        if (m.P(i, j) == 0.0) continue;
        for (int k = 0; k < j; ++k) {
          if (m.P(j, k) == 0.0) continue;
          double stays = 0.0;
          for (long a = 0; a <= delta - 2; ++a)
            for (long b = 0; b <= delta - 2 - a; ++b)
              stays += std::pow(m.P(i, i), static_cast<double>(a)) *
                       std::pow(m.P(j, j), static_cast<double>(b)) *
                       std::pow(m.P(k, k), static_cast<double>(delta - 2 - a - b));
          bound += m.grid.value(k) * m.P(i, j) * m.P(j, k) * stays;
        }
      }
    }
    total += m.pi0(i) * bound;
  }
  return total;
}

HittingTimes hitting_times(const ChainModel& m, Mechanism mechanism, int target) {
  const int n = m.grid.size();
  if (target < 0 || target >= n)
    throw std::out_of_range("hitting_times: target outside 0..L");

  HittingTimes out;
  out.k = Vector::Zero(n);
  // Payments never increase, so states below the target cannot reach it.
  for (int x = 0; x < target; ++x) out.k(x) = kInf;
  out.k(target) = 0.0;
  // Forward substitution in extended precision: hitting times reach ~1e6 on
  // fine grids and the recursion amplifies rounding in plain doubles.
  for (int x = target + 1; x < n; ++x) {
    double mass_inf = 0.0;
    long double rhs = 1.0L;
    for (int y = 0; y < x; ++y) {
      if (m.P(x, y) == 0.0) continue;
      if (std::isinf(out.k(y)))
        mass_inf += m.P(x, y);
      else
        rhs += static_cast<long double>(m.P(x, y)) * out.k(y);
    }
    const long double leave = 1.0L - static_cast<long double>(m.P(x, x));
    out.k(x) = (mass_inf > 0.0 || leave <= 0.0L) ? kInf
                                                 : static_cast<double>(rhs / leave);
  }

  if (mechanism == Mechanism::FirstPrice) {
    out.P0 = m.pi0.dot(out.k.unaryExpr([](double v) { return std::isinf(v) ? 0.0 : v; }));
    for (int x = 0; x < n; ++x)
      if (std::isinf(out.k(x)) && m.pi0(x) > 0.0) out.P0 = kInf;
    return out;
  }

  out.rho = Vector::Zero(n);
  for (int x = 0; x < target; ++x) out.rho(x) = kInf;
  out.rho(target) = 0.0;
  for (int x = target + 1; x < n; ++x) {
    double mass_inf = 0.0;
    long double rhs = 1.0L;
    for (int y = 0; y < x; ++y) {
      if (m.Q(x, y) > 0.0) {
        if (std::isinf(out.rho(y)))
          mass_inf += m.Q(x, y);
        else
          rhs += static_cast<long double>(m.Q(x, y)) * out.rho(y);
      }
    }
    for (int y = 0; y <= x; ++y) {
      if (m.Z(x, y) > 0.0) {
        if (std::isinf(out.k(y)))
          mass_inf += m.Z(x, y);
        else
          rhs += static_cast<long double>(m.Z(x, y)) * out.k(y);
      }
    }
    const long double leave = 1.0L - static_cast<long double>(m.Q(x, x));
    out.rho(x) = (mass_inf > 0.0 || leave <= 0.0L) ? kInf
                                                   : static_cast<double>(rhs / leave);
  }
  out.P0 = 0.0;
  for (int x = 0; x < n; ++x) {
    if (m.Pi0(x) <= 0.0) continue;
    if (std::isinf(out.rho(x))) {
      out.P0 = kInf;
      break;
    }
    out.P0 += m.Pi0(x) * out.rho(x);
  }
  return out;
}

PatienceCap max_patience(double P0, int m) {
  if (m < 1) throw std::invalid_argument("max_patience: m must be >= 1");
  if (!(P0 >= 0.0)) throw std::invalid_argument("max_patience: P0 must be >= 0");
  PatienceCap cap;
  cap.delta_max = std::isinf(P0) ? std::numeric_limits<long>::max()
                                 : static_cast<long>(std::floor(P0 / m));
  cap.feasible = cap.delta_max >= 1;
  return cap;
}

void dump_chain(std::ostream& os, const ChainModel& m) {
  os.precision(15);
  const int n = m.grid.size();
  os << "grid " << m.grid.v_min() << ' ' << m.grid.v_max() << ' ' << m.grid.delta() << '\n';
  os << "lambda " << m.lambda << '\n';
  os << "pB " << m.pB << '\n';
  auto emit = [&](const char* name, const Matrix& mat) {
    os << name << '\n';
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) os << (j ? " " : "") << mat(i, j);
      os << '\n';
    }
  };
  emit("P", m.P);
  emit("Q", m.Q);
  emit("Z", m.Z);
  os << "pi0\n";
  for (int i = 0; i < n; ++i) os << (i ? " " : "") << m.pi0(i);
  os << "\nPi0\n";
  for (int i = 0; i < n; ++i) os << (i ? " " : "") << m.Pi0(i);
  os << '\n';
}

}  // namespace ccn
