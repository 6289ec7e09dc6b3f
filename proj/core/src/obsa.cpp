#include "ccnauction/obsa.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

namespace ccn {

AuctionOutcome run_round(std::span<const std::pair<AgentId, double>> bids,
                         Mechanism mechanism, double reserve,
                         std::mt19937_64& rng, long time) {
  AuctionOutcome out;
  out.time = time;
  if (bids.empty()) return out;

  std::unordered_set<AgentId> seen;
  for (const auto& [id, bid] : bids) {
    (void)bid;
    if (!seen.insert(id).second)
      throw std::invalid_argument("run_round: duplicate bidder identity");
  }

  double top = bids[0].second;
  for (const auto& [id, bid] : bids) top = std::max(top, bid);

  std::vector<size_t> tied;
  for (size_t i = 0; i < bids.size(); ++i)
    if (bids[i].second == top) tied.push_back(i);
  size_t winner_idx = tied[0];
  if (tied.size() > 1) {
    std::uniform_int_distribution<size_t> pick(0, tied.size() - 1);
    winner_idx = tied[pick(rng)];
  }
  out.winner_id = bids[winner_idx].first;
  out.winner_bid = top;

  // Second-highest bid over the non-winning bidders.
  bool have_second = false;
  double second = 0.0;
  size_t second_idx = 0;
  for (size_t i = 0; i < bids.size(); ++i) {
    if (i == winner_idx) continue;
    if (!have_second || bids[i].second > second) {
      have_second = true;
      second = bids[i].second;
      second_idx = i;
    }
  }
  if (have_second) {
    out.bumped_id = bids[second_idx].first;
    out.bumped_bid = second;
  }

  if (mechanism == Mechanism::FirstPrice)
    out.charge_basis = out.winner_bid;
  else
    out.charge_basis = have_second ? second : reserve;
  return out;
}

double price_match_first(PAgentState& state, long T, double winner_bid) {
  if (state.t_ent + state.t_pat >= T && winner_bid < state.p_cur)
    state.p_cur = winner_bid;
  return state.p_cur;
}

double price_match_second(PAgentState& state, const AuctionOutcome& outcome) {
  const long T = outcome.time;
  if (state.t_ent + state.t_pat < T || !outcome.winner_id) return state.p_cur;
  if (state.id_mem) {
    if (*outcome.winner_id == *state.id_mem) {
      // B-1: the bumped agent won; inherit its second-highest bid.
      if (outcome.bumped_id && outcome.bumped_bid < state.p_cur) {
        state.id_mem = outcome.bumped_id;
        state.p_cur = outcome.bumped_bid;
      }
    } else {
      // B-2 / B-3: another winner; match and clear memory only on a lower bid.
      if (outcome.winner_bid < state.p_cur) {
        state.id_mem.reset();
        state.p_cur = outcome.winner_bid;
      }
    }
  } else if (outcome.winner_bid < state.p_cur) {
    state.p_cur = outcome.winner_bid;
  }
  return state.p_cur;
}

BundleSelection select_bundle(const std::function<double(std::uint32_t)>& value,
                              std::span<const double> payments) {
  const size_t n = payments.size();
  if (n > 20)
    throw std::invalid_argument(
        "select_bundle: more than 20 won servers; shrink the bundle before selecting");
  if (std::abs(value(0)) > 1e-12)
    throw std::invalid_argument("select_bundle: value of the empty set must be 0");

  BundleSelection best;  // empty set, surplus 0
  const std::uint32_t total = static_cast<std::uint32_t>(1u << n);
  for (std::uint32_t mask = 1; mask < total; ++mask) {
    double paid = 0.0;
    for (size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) paid += payments[i];
    const double surplus = value(mask) - paid;
    if (surplus > best.surplus) {
      best.mask = mask;
      best.surplus = surplus;
    }
  }
  return best;
}

namespace {

struct Observer {
  PAgentState st;
  bool bumped_alive = false;
};

int draw_poisson(double lambda, std::mt19937_64& rng) {
  std::poisson_distribution<int> d(lambda);
  return lambda > 0.0 ? d(rng) : 0;
}

}  // namespace

EpisodeLog simulate_obsa(const MarketConfig& cfg, Mechanism mechanism,
                         long horizon, std::uint64_t seed) {
  if (cfg.lambda < 0.0) throw std::invalid_argument("simulate_obsa: lambda must be >= 0");
  if (cfg.patience < 0) throw std::invalid_argument("simulate_obsa: patience must be >= 0");
  if (cfg.bumped_survival < 0.0 || cfg.bumped_survival > 1.0)
    throw std::invalid_argument("simulate_obsa: bumped_survival must be in [0,1]");
  if (horizon < 0) throw std::invalid_argument("simulate_obsa: horizon must be >= 0");

  const int entry_min =
      cfg.entry_min_bidders > 0
          ? cfg.entry_min_bidders
          : (mechanism == Mechanism::SecondPrice ? 2 : 1);
  const double v_min = cfg.bids.grid().v_min();

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution survives(cfg.bumped_survival);

  EpisodeLog log;
  std::vector<Observer> observers;
  AgentId next_id = 1;

  for (long t = 0; t < horizon; ++t) {
    const int n = draw_poisson(cfg.lambda, rng);
    std::vector<std::pair<AgentId, double>> bids;
    bids.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      bids.emplace_back(next_id++, cfg.bids.sample_value(rng));

    const AuctionOutcome outcome = run_round(bids, mechanism, v_min, rng, t);

    // Highest bid among the first n-1 slots; under the second-price overlay a
    // living bumped agent occupies the remaining participant slot.
    bool have_excl = false;
    double excl_bid = 0.0;
    AgentId excl_id = 0;
    for (int i = 0; i + 1 < n; ++i) {
      if (!have_excl || bids[static_cast<size_t>(i)].second > excl_bid) {
        have_excl = true;
        excl_bid = bids[static_cast<size_t>(i)].second;
        excl_id = bids[static_cast<size_t>(i)].first;
      }
    }

    RoundRecord rec;
    rec.round = t;
    rec.winner_id = outcome.winner_id;
    rec.winner_bid = outcome.winner_bid;
    rec.charge_basis = outcome.charge_basis;

    for (auto& obs : observers) {
      auto& st = obs.st;
      if (st.mode != AgentMode::Observer) continue;
      const double before = st.p_cur;
      if (mechanism == Mechanism::FirstPrice) {
        if (outcome.winner_id) price_match_first(st, t, outcome.winner_bid);
      } else {
        if (st.id_mem && obs.bumped_alive && !survives(rng)) obs.bumped_alive = false;
        if (st.id_mem && obs.bumped_alive) {
          // The bumped agent is one of the n participants; it bids its stored
          // valuation, which equals this observer's current payment.
          if (n >= 2) {
            AuctionOutcome eff;
            eff.time = t;
            if (excl_bid < st.p_cur) {
              eff.winner_id = st.id_mem;
              eff.winner_bid = st.p_cur;
              eff.bumped_id = excl_id;
              eff.bumped_bid = excl_bid;
            } else {
              eff.winner_id = excl_id;
              eff.winner_bid = excl_bid;
            }
            price_match_second(st, eff);
          }
        } else if (outcome.winner_id) {
          price_match_second(st, outcome);
        }
      }
      if (st.p_cur != before)
        rec.matches.push_back(MatchEvent{st.id, st.p_cur});
      if (st.p_cur > before)
        throw std::logic_error("simulate_obsa: observer payment increased");
    }
    log.rounds.push_back(std::move(rec));

    if (outcome.winner_id && n >= entry_min) {
      Observer obs;
      obs.st.id = *outcome.winner_id;
      obs.st.bid = outcome.winner_bid;
      obs.st.t_ent = t;
      obs.st.t_pat = cfg.patience;
      obs.st.p_cur = outcome.charge_basis;
      obs.st.mode = AgentMode::Observer;
      if (mechanism == Mechanism::SecondPrice && outcome.bumped_id) {
        obs.st.id_mem = outcome.bumped_id;
        obs.bumped_alive = true;
      }
      observers.push_back(std::move(obs));
    }

    for (auto& obs : observers) {
      auto& st = obs.st;
      if (st.mode == AgentMode::Observer && st.t_ent + st.t_pat == t) {
        st.mode = AgentMode::Departed;
        log.final_payments.emplace_back(st.id, st.p_cur);
        log.income += st.p_cur;
      }
    }
  }
  return log;
}

std::string format_episode(const EpisodeLog& log) {
  std::ostringstream os;
  os.precision(12);
  for (const auto& r : log.rounds) {
    os << r.round << ' ';
    if (r.winner_id)
      os << *r.winner_id << ' ' << r.winner_bid << ' ' << r.charge_basis;
    else
      os << "- - -";
    for (const auto& m : r.matches) os << ' ' << m.agent << ':' << m.payment;
    os << '\n';
  }
  return os.str();
}

}  // namespace ccn
