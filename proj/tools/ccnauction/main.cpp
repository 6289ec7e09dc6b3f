#include <algorithm>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccnauction/chain.hpp"
#include "ccnauction/config.hpp"
#include "ccnauction/io.hpp"
#include "ccnauction/scenarios.hpp"

namespace fs = std::filesystem;
using ccn::Config;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<long> reps;
  bool json = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "key=value configuration file");
  cmd->add_option("--preset", o.preset, "named preset: table1-uniform | table1-laplace | table2");
  cmd->add_option("--seed", o.seed, "master seed override");
  cmd->add_option("--reps", o.reps, "replication count override");
  cmd->add_option("--out", o.out, "result directory");
  cmd->add_flag("--json", o.json, "emit JSON mirrors next to each CSV");
}

Config load_config(const CommonOpts& o) {
  if (!o.config_path.empty() && !o.preset.empty())
    throw std::invalid_argument("--config and --preset are mutually exclusive");
  Config cfg;
  if (!o.config_path.empty())
    cfg = ccn::parse_config(o.config_path);
  else if (!o.preset.empty())
    cfg = ccn::preset_config(o.preset);
  else
    throw std::invalid_argument("one of --config or --preset is required");
  if (o.seed) cfg.seed = *o.seed;
  if (o.reps) cfg.reps = *o.reps;
  cfg.validate();
  return cfg;
}

struct Emitter {
  fs::path dir;
  bool json = false;
  std::vector<std::string> files;

  void table(const std::string& name, const std::vector<std::string>& header,
             const std::vector<std::vector<double>>& rows) {
    fs::create_directories(dir);
    ccn::write_file_atomic(dir / (name + ".csv"), ccn::csv_table(header, rows));
    files.push_back(name + ".csv");
    if (json) {
      nlohmann::json j;
      j["header"] = header;
      j["rows"] = rows;
      ccn::write_file_atomic(dir / (name + ".json"), j.dump(2) + "\n");
      files.push_back(name + ".json");
    }
  }

  void manifest(const std::string& command, const Config& cfg) {
    std::string m;
    m += "tool=ccnauction\n";
    m += "version=" CCN_VERSION "\n";
    m += "command=" + command + "\n";
    std::sort(files.begin(), files.end());
    for (const auto& f : files) m += "file=" + f + "\n";
    m += "[config]\n";
    m += ccn::serialize_config(cfg);
    ccn::write_file_atomic(dir / "manifest.txt", m);
  }
};

std::vector<std::vector<double>> scenario1_rows(const ccn::Scenario1Result& r) {
  std::vector<std::vector<double>> rows;
  for (const auto& row : r.rows)
    rows.push_back({row.lambda, static_cast<double>(row.delta), row.analytic,
                    row.simulated, row.stderr_});
  return rows;
}

const std::vector<std::string> kScenario1Header = {"N", "Delta", "analytic_income",
                                                   "simulated_income", "stderr"};

int run(int argc, char** argv) {
  CLI::App app{"Two-stage cloud auction market toolkit"};
  app.require_subcommand(1);

  CommonOpts o1, o2, o3, o4, oc, ov;
  auto* s1 = app.add_subcommand("scenario1", "analytic vs simulated OBSA income");
  auto* s2 = app.add_subcommand("scenario2", "bid curves over the gamma sweep");
  auto* s3 = app.add_subcommand("scenario3", "OBSA vs combinatorial baseline throughput");
  auto* s4 = app.add_subcommand("scenario4", "delayed-entrance participant series");
  auto* ch = app.add_subcommand("chain", "analytic chain queries");
  auto* cu = app.add_subcommand("curve", "solve one bid curve");
  add_common(s1, o1);
  add_common(s2, o2);
  add_common(s3, o3);
  add_common(s4, o4);
  add_common(ch, oc);
  add_common(cu, ov);

  double ch_lambda = 10.0;
  long ch_delta = 0;
  std::string ch_mechanism = "second";
  std::string ch_query = "revenue";
  int ch_margin = 2;
  ch->add_option("--lambda", ch_lambda, "participation mean");
  ch->add_option("--delta-rounds", ch_delta, "patience rounds");
  ch->add_option("--mechanism", ch_mechanism, "first | second")
      ->check(CLI::IsMember({"first", "second"}));
  ch->add_option("--query", ch_query, "revenue | p0 | delta-max")
      ->check(CLI::IsMember({"revenue", "p0", "delta-max"}));
  ch->add_option("--margin", ch_margin, "profit margin divisor for delta-max");

  std::optional<double> cu_gamma;
  cu->add_option("--gamma", cu_gamma, "discount rate (default: first configured gamma)");

  CLI11_PARSE(app, argc, argv);

  auto scenario = [&](const CommonOpts& o, const std::string& name,
                      const std::function<void(const Config&, Emitter&)>& body) {
    const Config cfg = load_config(o);
    Emitter em{fs::path(o.out), o.json, {}};
    try {
      body(cfg, em);
    } catch (const std::exception& e) {
      fs::create_directories(em.dir);
      ccn::write_file_atomic(em.dir / "error.txt",
                             std::string(name) + " failed: " + e.what() + "\n");
      throw;
    }
    em.manifest(name, cfg);
    return 0;
  };

  if (s1->parsed()) {
    return scenario(o1, "scenario1", [](const Config& cfg, Emitter& em) {
      em.table("scenario1_first", kScenario1Header,
               scenario1_rows(ccn::run_scenario1(cfg, ccn::Mechanism::FirstPrice)));
      em.table("scenario1_second", kScenario1Header,
               scenario1_rows(ccn::run_scenario1(cfg, ccn::Mechanism::SecondPrice)));
    });
  }
  if (s2->parsed()) {
    return scenario(o2, "scenario2", [](const Config& cfg, Emitter& em) {
      const ccn::Scenario2Result r = ccn::run_scenario2(cfg);
      std::vector<std::string> header = {"r"};
      for (double g : r.gammas) header.push_back("g" + ccn::format_number(g));
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < r.curves.front().size(); ++i) {
        std::vector<double> row = {r.curves.front().r(i)};
        for (const auto& c : r.curves) row.push_back(c.values[i]);
        rows.push_back(std::move(row));
      }
      em.table("scenario2", header, rows);
    });
  }
  if (s3->parsed()) {
    return scenario(o3, "scenario3", [](const Config& cfg, Emitter& em) {
      const ccn::Scenario3Result r = ccn::run_scenario3(cfg);
      auto row = [](double id, const ccn::MetricsReport& m) {
        return std::vector<double>{id, static_cast<double>(m.total_winners),
                                   static_cast<double>(m.total_sold), m.mean_income,
                                   m.income_variance};
      };
      em.table("scenario3",
               {"mechanism", "total_winners", "total_sold", "income_per_minute",
                "payment_variance"},
               {row(0, r.obsa), row(1, r.baseline)});
    });
  }
  if (s4->parsed()) {
    return scenario(o4, "scenario4", [](const Config& cfg, Emitter& em) {
      const ccn::Scenario4Result r = ccn::run_scenario4(cfg);
      std::vector<std::vector<double>> rows;
      for (std::size_t t = 0; t < r.obsa_participants.size(); ++t)
        rows.push_back({static_cast<double>(t),
                        static_cast<double>(r.obsa_participants[t]),
                        static_cast<double>(r.baseline_participants[t])});
      em.table("scenario4", {"t", "obsa_participants", "baseline_participants"}, rows);
    });
  }
  if (ch->parsed()) {
    const Config cfg = load_config(oc);
    const ccn::Mechanism mech = ch_mechanism == "first" ? ccn::Mechanism::FirstPrice
                                                        : ccn::Mechanism::SecondPrice;
    const ccn::ChainModel model =
        ccn::build_chain(ccn::make_bid_distribution(cfg), ch_lambda, cfg.pB);
    if (ch_query == "revenue") {
      std::cout << ccn::format_number(ccn::expected_revenue(model, mech, ch_delta)) << "\n";
    } else {
      const ccn::HittingTimes ht = ccn::hitting_times(model, mech);
      if (ch_query == "p0")
        std::cout << ccn::format_number(ht.P0) << "\n";
      else
        std::cout << ccn::max_patience(ht.P0, ch_margin).delta_max << "\n";
    }
    return 0;
  }
  if (cu->parsed()) {
    return scenario(ov, "curve", [&](const Config& cfg, Emitter& em) {
      const double gamma = cu_gamma ? *cu_gamma : cfg.gammas.front();
      const ccn::BidCurve curve = ccn::solve_second_price_curve(
          ccn::make_stage_two(cfg, gamma), cfg.Tp / static_cast<double>(cfg.ode_steps));
      if (curve.clamped_from)
        std::cerr << "warning: curve clamped at zero from r = "
                  << curve.r(*curve.clamped_from) << "\n";
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < curve.size(); ++i)
        rows.push_back({curve.r(i), curve.values[i]});
      em.table("curve", {"r", "bid"}, rows);
    });
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
