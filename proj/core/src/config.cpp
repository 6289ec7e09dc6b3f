#include "ccnauction/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ccnauction/io.hpp"

namespace ccn {

namespace {

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + value + "'");
  }
}

long parse_long(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  const long l = static_cast<long>(v);
  if (static_cast<double>(l) != v)
    throw std::invalid_argument("config: key '" + key + "' expects an integer, got '" + value + "'");
  return l;
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty())
    throw std::invalid_argument("config: key '" + key + "' expects a comma list of numbers");
  return out;
}

struct Field {
  bool required;
  std::function<void(Config&, const std::string&, const std::string&)> set;
};

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = {
      {"bid_law", {true, [](Config& c, const std::string& k, const std::string& v) {
                     if (v != "uniform" && v != "laplace")
                       throw std::invalid_argument("config: key '" + k + "' must be uniform or laplace");
                     c.bid_law = v;
                   }}},
      {"v_min", {true, [](Config& c, const std::string& k, const std::string& v) { c.v_min = parse_double(k, v); }}},
      {"v_max", {true, [](Config& c, const std::string& k, const std::string& v) { c.v_max = parse_double(k, v); }}},
      {"delta", {true, [](Config& c, const std::string& k, const std::string& v) { c.delta = parse_double(k, v); }}},
      {"laplace_mu", {false, [](Config& c, const std::string& k, const std::string& v) { c.laplace_mu = parse_double(k, v); }}},
      {"laplace_w", {false, [](Config& c, const std::string& k, const std::string& v) { c.laplace_w = parse_double(k, v); }}},
      {"pB", {true, [](Config& c, const std::string& k, const std::string& v) { c.pB = parse_double(k, v); }}},
      {"lambdas", {true, [](Config& c, const std::string& k, const std::string& v) { c.lambdas = parse_list(k, v); }}},
      {"max_delta", {true, [](Config& c, const std::string& k, const std::string& v) { c.max_delta = static_cast<int>(parse_long(k, v)); }}},
      {"u", {true, [](Config& c, const std::string& k, const std::string& v) { c.u = parse_double(k, v); }}},
      {"varpi", {true, [](Config& c, const std::string& k, const std::string& v) { c.varpi = parse_double(k, v); }}},
      {"mu_active", {true, [](Config& c, const std::string& k, const std::string& v) { c.mu_active = parse_double(k, v); }}},
      {"lambdaA", {true, [](Config& c, const std::string& k, const std::string& v) { c.lambdaA = parse_double(k, v); }}},
      {"lambdaCCN", {true, [](Config& c, const std::string& k, const std::string& v) { c.lambdaCCN = parse_double(k, v); }}},
      {"lambdaCP", {true, [](Config& c, const std::string& k, const std::string& v) { c.lambdaCP = parse_double(k, v); }}},
      {"Tp", {true, [](Config& c, const std::string& k, const std::string& v) { c.Tp = parse_double(k, v); }}},
      {"a", {true, [](Config& c, const std::string& k, const std::string& v) { c.a = parse_double(k, v); }}},
      {"z", {true, [](Config& c, const std::string& k, const std::string& v) { c.z = parse_double(k, v); }}},
      {"q", {true, [](Config& c, const std::string& k, const std::string& v) { c.q = parse_double(k, v); }}},
      {"gammas", {true, [](Config& c, const std::string& k, const std::string& v) { c.gammas = parse_list(k, v); }}},
      {"reps", {false, [](Config& c, const std::string& k, const std::string& v) { c.reps = parse_long(k, v); }}},
      {"seed", {false, [](Config& c, const std::string& k, const std::string& v) { c.seed = static_cast<std::uint64_t>(parse_long(k, v)); }}},
      {"horizon", {false, [](Config& c, const std::string& k, const std::string& v) { c.horizon = parse_long(k, v); }}},
      {"arrival_mean", {false, [](Config& c, const std::string& k, const std::string& v) { c.arrival_mean = parse_double(k, v); }}},
      {"informed_fraction", {false, [](Config& c, const std::string& k, const std::string& v) { c.informed_fraction = parse_double(k, v); }}},
      {"low_period", {false, [](Config& c, const std::string& k, const std::string& v) { c.low_period = static_cast<int>(parse_long(k, v)); }}},
      {"types", {false, [](Config& c, const std::string& k, const std::string& v) { c.types = static_cast<int>(parse_long(k, v)); }}},
      {"capacity", {false, [](Config& c, const std::string& k, const std::string& v) { c.capacity = static_cast<int>(parse_long(k, v)); }}},
      {"bundle_min", {false, [](Config& c, const std::string& k, const std::string& v) { c.bundle_min = static_cast<int>(parse_long(k, v)); }}},
      {"bundle_max", {false, [](Config& c, const std::string& k, const std::string& v) { c.bundle_max = static_cast<int>(parse_long(k, v)); }}},
      {"rate_min", {false, [](Config& c, const std::string& k, const std::string& v) { c.rate_min = parse_double(k, v); }}},
      {"rate_max", {false, [](Config& c, const std::string& k, const std::string& v) { c.rate_max = parse_double(k, v); }}},
      {"customer_mean", {false, [](Config& c, const std::string& k, const std::string& v) { c.customer_mean = parse_double(k, v); }}},
      {"ode_steps", {false, [](Config& c, const std::string& k, const std::string& v) { c.ode_steps = parse_long(k, v); }}},
  };
  return table;
}

}  // namespace

void Config::validate() const {
  if (bid_law != "uniform" && bid_law != "laplace")
    throw std::invalid_argument("config: bid_law must be uniform or laplace");
  BidGrid grid(v_min, v_max, delta);
  if (bid_law == "laplace") {
    if (laplace_w <= 0.0)
      throw std::invalid_argument("config: laplace_w required (> 0) when bid_law=laplace");
    SampledLaplaceParams check(grid, laplace_mu, laplace_w);
  }
  if (pB < 0.0 || pB > 1.0) throw std::invalid_argument("config: pB must be in [0,1]");
  for (double l : lambdas)
    if (!(l > 0.0)) throw std::invalid_argument("config: lambdas must be > 0");
  if (max_delta < 0) throw std::invalid_argument("config: max_delta must be >= 0");
  for (double g : gammas)
    if (g < 0.0) throw std::invalid_argument("config: gammas must be >= 0");
  make_stage_two(*this, gammas.empty() ? 0.0 : gammas.front()).validate();
  if (reps < 1) throw std::invalid_argument("config: reps must be >= 1");
  if (horizon < 0) throw std::invalid_argument("config: horizon must be >= 0");
  if (arrival_mean < 0.0) throw std::invalid_argument("config: arrival_mean must be >= 0");
  if (informed_fraction < 0.0 || informed_fraction > 1.0)
    throw std::invalid_argument("config: informed_fraction must be in [0,1]");
  if (low_period < 1) throw std::invalid_argument("config: low_period must be >= 1");
  if (types < 1) throw std::invalid_argument("config: types must be >= 1");
  if (capacity < 1) throw std::invalid_argument("config: capacity must be >= 1");
  if (bundle_min < 1 || bundle_max < bundle_min)
    throw std::invalid_argument("config: need 1 <= bundle_min <= bundle_max");
  if (!(0.0 < rate_min && rate_min <= rate_max && rate_max <= 1.0))
    throw std::invalid_argument("config: need 0 < rate_min <= rate_max <= 1");
  if (customer_mean < 0.0) throw std::invalid_argument("config: customer_mean must be >= 0");
  if (ode_steps < 2) throw std::invalid_argument("config: ode_steps must be >= 2");
}

Config preset_config(const std::string& name) {
  Config c;
  // Stage-two defaults shared by every preset.
  c.u = 5.0;
  c.varpi = 105.0;
  c.mu_active = 0.6;
  c.lambdaA = 0.2;
  c.lambdaCCN = 0.5;
  c.lambdaCP = 0.75;
  c.Tp = 10.0;
  c.a = 0.01;
  c.z = 104.0;
  c.q = 0.01;
  c.gammas = {0.05, 0.1, 0.2};
  // Stage-one defaults shared by every preset.
  c.v_min = 48.0;
  c.v_max = 312.0;
  c.delta = 1.0;
  c.pB = 0.5;
  c.lambdas = {5.0, 10.0, 20.0};
  c.max_delta = 5;

  if (name == "table1-uniform") {
    c.bid_law = "uniform";
  } else if (name == "table1-laplace") {
    c.bid_law = "laplace";
    c.laplace_mu = 70.0;
    c.laplace_w = 50.0;
  } else if (name == "table2") {
    c.bid_law = "uniform";
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  c.validate();
  return c;
}

Config parse_config_text(const std::string& text) {
  Config c;
  std::set<std::string> seen;
  std::istringstream is(text);
  std::string line;
  long lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not key=value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    const auto vstart = value.find_first_not_of(" \t");
    value = vstart == std::string::npos ? "" : value.substr(vstart);
    const auto it = fields().find(key);
    if (it == fields().end())
      throw std::invalid_argument("config: unknown key '" + key + "'");
    it->second.set(c, key, value);
    seen.insert(key);
  }
  std::string missing;
  for (const auto& [key, field] : fields())
    if (field.required && !seen.count(key)) missing += missing.empty() ? key : ", " + key;
  if (!missing.empty())
    throw std::invalid_argument("config: missing required keys: " + missing);
  c.validate();
  return c;
}

Config parse_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config_text(buf.str());
}

std::string serialize_config(const Config& cfg) {
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
    return s;
  };
  std::map<std::string, std::string> kv = {
      {"bid_law", cfg.bid_law},
      {"v_min", format_number(cfg.v_min)},
      {"v_max", format_number(cfg.v_max)},
      {"delta", format_number(cfg.delta)},
      {"pB", format_number(cfg.pB)},
      {"lambdas", list(cfg.lambdas)},
      {"max_delta", std::to_string(cfg.max_delta)},
      {"u", format_number(cfg.u)},
      {"varpi", format_number(cfg.varpi)},
      {"mu_active", format_number(cfg.mu_active)},
      {"lambdaA", format_number(cfg.lambdaA)},
      {"lambdaCCN", format_number(cfg.lambdaCCN)},
      {"lambdaCP", format_number(cfg.lambdaCP)},
      {"Tp", format_number(cfg.Tp)},
      {"a", format_number(cfg.a)},
      {"z", format_number(cfg.z)},
      {"q", format_number(cfg.q)},
      {"gammas", list(cfg.gammas)},
      {"reps", std::to_string(cfg.reps)},
      {"seed", std::to_string(cfg.seed)},
      {"horizon", std::to_string(cfg.horizon)},
      {"arrival_mean", format_number(cfg.arrival_mean)},
      {"informed_fraction", format_number(cfg.informed_fraction)},
      {"low_period", std::to_string(cfg.low_period)},
      {"types", std::to_string(cfg.types)},
      {"capacity", std::to_string(cfg.capacity)},
      {"bundle_min", std::to_string(cfg.bundle_min)},
      {"bundle_max", std::to_string(cfg.bundle_max)},
      {"rate_min", format_number(cfg.rate_min)},
      {"rate_max", format_number(cfg.rate_max)},
      {"customer_mean", format_number(cfg.customer_mean)},
      {"ode_steps", std::to_string(cfg.ode_steps)},
  };
  if (cfg.bid_law == "laplace") {
    kv["laplace_mu"] = format_number(cfg.laplace_mu);
    kv["laplace_w"] = format_number(cfg.laplace_w);
  }
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

BidDistribution make_bid_distribution(const Config& cfg) {
  BidGrid grid(cfg.v_min, cfg.v_max, cfg.delta);
  if (cfg.bid_law == "uniform") return BidDistribution::uniform(grid);
  return BidDistribution::sampled_laplace(
      SampledLaplaceParams(grid, cfg.laplace_mu, cfg.laplace_w));
}

StageTwoParams make_stage_two(const Config& cfg, double gamma) {
  StageTwoParams p;
  p.u = cfg.u;
  p.gamma = gamma;
  p.varpi = cfg.varpi;
  p.mu_active = cfg.mu_active;
  p.lambdaA = cfg.lambdaA;
  p.lambdaCCN = cfg.lambdaCCN;
  p.lambdaCP = cfg.lambdaCP;
  p.Tp = cfg.Tp;
  p.a = cfg.a;
  p.z = cfg.z;
  p.q = cfg.q;
  return p;
}

}  // namespace ccn
