#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccnauction/distribution.hpp"
#include "ccnauction/hjb.hpp"

namespace ccn {

// Flat scenario configuration. Every parameter in the model is scalar (or a
// short list), so the on-disk format is plain key=value text; presets
// "table1-uniform", "table1-laplace" and "table2" provide complete records.
struct Config {
  // Stage-one bid market.
  std::string bid_law;  // "uniform" | "laplace"
  double v_min = 0.0;
  double v_max = 0.0;
  double delta = 0.0;          // grid step
  double laplace_mu = 0.0;     // required when bid_law == "laplace"
  double laplace_w = 0.0;
  double pB = 0.5;             // bumped-agent survival probability
  std::vector<double> lambdas; // participation means swept in scenario 1
  int max_delta = 0;           // patience sweep upper bound

  // Stage-two (CCN <-> CP) market.
  double u = 0.0;
  double varpi = 0.0;
  double mu_active = 0.0;
  double lambdaA = 0.0;
  double lambdaCCN = 0.0;
  double lambdaCP = 0.0;
  double Tp = 0.0;
  double a = 0.0;
  double z = 0.0;
  double q = 0.0;
  std::vector<double> gammas;  // discount rates swept in scenario 2

  // Run control and scenario 3/4 shape (optional keys with defaults).
  long reps = 10000;
  std::uint64_t seed = 1;
  long horizon = 200;
  double arrival_mean = 93.0;       // scenario 4 entrants per instant
  double informed_fraction = 0.2;   // scenario 4
  int low_period = 10;              // scenario 4 trough spacing
  int types = 10;                   // scenario 3 server types
  int capacity = 1000;              // scenario 3 per-type auctions per minute
  int bundle_min = 1;
  int bundle_max = 10;
  double rate_min = 1.0 / 15.0;     // scenario 3 availability rate support
  double rate_max = 1.0;
  double customer_mean = 100.0;     // scenario 3 customer arrivals per minute
  long ode_steps = 2000;            // curve resolution: h = Tp / ode_steps

  void validate() const;
};

// Named complete configurations mirroring the two parameter tables.
Config preset_config(const std::string& name);

// Parses key=value text ('#' comments, blank lines ignored). Unknown keys and
// missing required keys are reported by name; an empty file lists every
// required key.
Config parse_config_text(const std::string& text);
Config parse_config(const std::string& path);

// Canonical key=value echo (sorted keys) for manifests and reruns.
std::string serialize_config(const Config& cfg);

BidDistribution make_bid_distribution(const Config& cfg);
StageTwoParams make_stage_two(const Config& cfg, double gamma);

}  // namespace ccn
