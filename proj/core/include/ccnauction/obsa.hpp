#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "ccnauction/distribution.hpp"

namespace ccn {

enum class Mechanism { FirstPrice, SecondPrice };

using AgentId = std::uint64_t;

enum class AgentMode { Participant, Observer, Departed };

// Per-agent matching state. p_cur is the running payment, nonincreasing once
// the agent turns Observer; id_mem stores the bumped agent under the
// second-price mechanism.
struct PAgentState {
  AgentId id = 0;
  double bid = 0.0;
  long t_ent = 0;              // entry round
  long t_pat = 0;              // patience, in rounds
  double p_cur = 0.0;
  std::optional<AgentId> id_mem;
  AgentMode mode = AgentMode::Participant;
};

struct AuctionOutcome {
  long time = 0;
  std::optional<AgentId> winner_id;
  double winner_bid = 0.0;
  std::optional<AgentId> bumped_id;
  double bumped_bid = 0.0;
  double charge_basis = 0.0;   // winner's bid (first price) or second-highest / reserve
};

// Sealed-bid round: the highest bidder wins; under the second-price mechanism
// the charge basis is the second-highest bid, or `reserve` when the winner is
// alone. Ties among the highest bids break uniformly at random.
AuctionOutcome run_round(std::span<const std::pair<AgentId, double>> bids,
                         Mechanism mechanism, double reserve,
                         std::mt19937_64& rng, long time = 0);

// First-price price matching: match down to the round winner's bid while the
// patience window is still open. Returns (and stores) the updated payment.
double price_match_first(PAgentState& state, long T, double winner_bid);

// Second-price price matching over a completed round's outcome.
double price_match_second(PAgentState& state, const AuctionOutcome& outcome);

struct BundleSelection {
  std::uint32_t mask = 0;      // bit i set <=> server i kept
  double surplus = 0.0;
};

// Exhaustive utility-maximizing subset of won servers; value is a set function
// over bitmasks with value(0) == 0, payments[i] the matched price of server i.
BundleSelection select_bundle(const std::function<double(std::uint32_t)>& value,
                              std::span<const double> payments);

struct MarketConfig {
  BidDistribution bids;
  double lambda = 0.0;             // mean participants per round
  long patience = 0;               // observation window, in rounds
  double bumped_survival = 0.5;    // p(B), second price only
  int entry_min_bidders = 0;       // 0 -> mechanism default (1 first, 2 second)
};

struct MatchEvent {
  AgentId agent;
  double payment;
};

struct RoundRecord {
  long round = 0;
  std::optional<AgentId> winner_id;
  double winner_bid = 0.0;
  double charge_basis = 0.0;
  std::vector<MatchEvent> matches;
};

struct EpisodeLog {
  std::vector<RoundRecord> rounds;
  std::vector<std::pair<AgentId, double>> final_payments;  // patience elapsed in horizon
  double income = 0.0;
};

// Runs one auction sequence for `horizon` rounds: Poisson(lambda) fresh
// bidders per round, winners turn Observer and price-match per mechanism,
// income accrues when an observer's patience elapses. Deterministic per seed.
EpisodeLog simulate_obsa(const MarketConfig& cfg, Mechanism mechanism,
                         long horizon, std::uint64_t seed);

// Serializes an episode log, one line per round:
//   round winner_id winner_bid charge_basis [agent:payment ...]
std::string format_episode(const EpisodeLog& log);

}  // namespace ccn
