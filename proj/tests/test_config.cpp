#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ccnauction/config.hpp"
#include "ccnauction/io.hpp"

using namespace ccn;
using doctest::Contains;

TEST_CASE("presets") {
  const Config uni = preset_config("table1-uniform");
  CHECK(uni.bid_law == "uniform");
  CHECK(uni.v_min == 48.0);
  CHECK(uni.v_max == 312.0);
  CHECK(uni.delta == 1.0);
  CHECK(uni.pB == 0.5);
  CHECK(uni.lambdas == std::vector<double>{5.0, 10.0, 20.0});
  CHECK(uni.max_delta == 5);
  CHECK(uni.reps == 10000);

  const Config lap = preset_config("table1-laplace");
  CHECK(lap.bid_law == "laplace");
  CHECK(lap.laplace_mu == 70.0);
  CHECK(lap.laplace_w == 50.0);

  const Config two = preset_config("table2");
  CHECK(two.u == 5.0);
  CHECK(two.varpi == 105.0);
  CHECK(two.mu_active == 0.6);
  CHECK(two.lambdaA == 0.2);
  CHECK(two.lambdaCCN == 0.5);
  CHECK(two.lambdaCP == 0.75);
  CHECK(two.Tp == 10.0);
  CHECK(two.a == 0.01);
  CHECK(two.z == 104.0);
  CHECK(two.q == two.a);
  CHECK(two.gammas == std::vector<double>{0.05, 0.1, 0.2});

  CHECK_THROWS_WITH_AS(preset_config("table9"), Contains("table9"),
                       std::invalid_argument);
}

TEST_CASE("config text parsing") {
  SUBCASE("empty input lists every required key") {
    CHECK_THROWS_WITH_AS(parse_config_text(""), Contains("missing required keys"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text(""), Contains("bid_law"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text(""), Contains("gammas"),
                         std::invalid_argument);
  }

  SUBCASE("round trip through the canonical form") {
    for (const char* name : {"table1-uniform", "table1-laplace", "table2"}) {
      const Config cfg = preset_config(name);
      const Config back = parse_config_text(serialize_config(cfg));
      CHECK(serialize_config(back) == serialize_config(cfg));
    }
  }

  SUBCASE("comments, blank lines, and whitespace") {
    std::string text = serialize_config(preset_config("table1-uniform"));
    text = "# leading comment\n\n  \t\n" + text + "  reps = 77  # trailing\n";
    const Config cfg = parse_config_text(text);
    CHECK(cfg.reps == 77);
    CHECK(cfg.bid_law == "uniform");
  }

  SUBCASE("unknown keys are reported by name") {
    const std::string text =
        serialize_config(preset_config("table1-uniform")) + "warp_factor=9\n";
    CHECK_THROWS_WITH_AS(parse_config_text(text), Contains("warp_factor"),
                         std::invalid_argument);
  }

  SUBCASE("malformed values are reported with the key") {
    const std::string text =
        serialize_config(preset_config("table1-uniform")) + "pB=brisk\n";
    CHECK_THROWS_WITH_AS(parse_config_text(text), Contains("pB"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("reps=1.5\n"), Contains("integer"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("just a line\n"), Contains("key=value"),
                         std::invalid_argument);
  }

  SUBCASE("laplace law requires a width") {
    std::string text;
    {
      Config cfg = preset_config("table1-uniform");
      cfg.laplace_mu = 70.0;
      text = serialize_config(cfg);
      const auto pos = text.find("bid_law=uniform");
      text.replace(pos, 15, "bid_law=laplace");
      text += "laplace_mu=70\n";
    }
    CHECK_THROWS_WITH_AS(parse_config_text(text), Contains("laplace_w"),
                         std::invalid_argument);
  }
}

TEST_CASE("config validation") {
  Config cfg = preset_config("table1-uniform");
  cfg.lambdas = {0.0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = preset_config("table1-uniform");
  cfg.v_max = 47.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = preset_config("table1-uniform");
  cfg.gammas = {-0.1};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = preset_config("table1-uniform");
  cfg.rate_min = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = preset_config("table1-uniform");
  cfg.bundle_max = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("derived model objects") {
  const Config uni = preset_config("table1-uniform");
  const BidDistribution d = make_bid_distribution(uni);
  CHECK(d.grid().size() == 265);
  CHECK(d.pmf(0) == doctest::Approx(1.0 / 265.0).epsilon(1e-14));

  const BidDistribution lap = make_bid_distribution(preset_config("table1-laplace"));
  CHECK(lap.laplace());

  const StageTwoParams p = make_stage_two(uni, 0.1);
  CHECK(p.gamma == 0.1);
  CHECK(p.varpi == 105.0);
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("csv tables") {
  CHECK(csv_table({"a", "b"}, {{1.0, 2.5}, {3.0, 4.0}}) == "a,b\n1,2.5\n3,4\n");
  CHECK_THROWS_AS(csv_table({"a", "b"}, {{1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(csv_table({}, {}), std::invalid_argument);
  // 12 significant digits survive the round trip for run outputs.
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(48.0) == "48");
}

TEST_CASE("atomic file writes") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ccn_io_test";
  fs::create_directories(dir);
  const fs::path target = dir / "out.txt";

  write_file_atomic(target, "first\n");
  write_file_atomic(target, "second\n");
  std::ifstream in(target);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "second\n");
  // No temporary litter remains next to the target.
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  fs::remove_all(dir);
}
