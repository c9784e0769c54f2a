#include <doctest.h>

#include <stdexcept>
#include <tuple>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "coact/bench/aggregate.hpp"
#include "coact/bench/config.hpp"
#include "coact/bench/run_csv.hpp"
#include "coact/bench/sweep.hpp"
#include "coact/bench/verify_suite.hpp"

using namespace coact;
using namespace coact::bench;

namespace {

RunRow row(std::size_t seed, std::string strategy, double eps, std::size_t it, double ret,
           double td) {
  return {seed, std::move(strategy), eps, it, ret, td, it * 100};
}

ExperimentConfig small_sweep() {
  ExperimentConfig c;
  c.seeds = 3;
  c.protocol.iterations = 12;
  c.master_seed = 99;
  return c;
}

}  // namespace

TEST_CASE("env and learner specs") {
  CHECK(EnvSpec::parse("chain").chain_length == 10);
  CHECK(EnvSpec::parse("chain:12").chain_length == 12);
  CHECK(EnvSpec::parse("chain{7}").chain_length == 7);
  const auto r = EnvSpec::parse("random{20,4}");
  CHECK(r.kind == EnvSpec::Kind::Random);
  CHECK(r.states == 20);
  CHECK(r.actions == 4);
  CHECK(EnvSpec::parse("random:6x3").name() == "random6x3");
  CHECK(EnvSpec::parse("chain").name() == "chain10");
  CHECK_THROWS_AS(EnvSpec::parse("grid"), ConfigError);
  CHECK_THROWS_AS(EnvSpec::parse("random:5"), ConfigError);

  CHECK(LearnerSpec::parse("tabular").kind == LearnerSpec::Kind::Tabular);
  CHECK(LearnerSpec::parse("tabular-double").kind == LearnerSpec::Kind::TabularDouble);
  CHECK(LearnerSpec::parse("quantile{5}").quantiles == 5);
  const auto n = LearnerSpec::parse("network:16");
  CHECK(n.kind == LearnerSpec::Kind::Network);
  CHECK(n.hidden == 16);
  CHECK_THROWS_AS(LearnerSpec::parse("lstm"), ConfigError);
}

TEST_CASE("settings text") {
  const auto s = parse_settings("# sweep\nenv = chain:10\n\n  seeds=4   # trailing\nalpha = 0.5\n");
  CHECK(s.at("env") == "chain:10");
  CHECK(s.at("seeds") == "4");
  CHECK(s.at("alpha") == "0.5");
  try {
    parse_settings("env = chain\nthis line is junk\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(load_settings_file("/nonexistent/coact.cfg"), ConfigError);
}

TEST_CASE("experiment config") {
  const ExperimentConfig d;
  CHECK(d.epsilons == std::vector<double>{0.15, 0.175, 0.2, 0.225, 0.25});
  CHECK(d.protocol.iterations == 300);
  CHECK(d.seeds == 20);
  CHECK(d.effective_alpha() == 1.0);
  CHECK(d.gamma == 0.9);

  const auto c = ExperimentConfig::from_settings({{"env", "random:6x3"},
                                                  {"learner", "network:8"},
                                                  {"strategies", "coact, ucb"},
                                                  {"epsilons", "0.1:0.3:0.1"},
                                                  {"iterations", "5"},
                                                  {"master_seed", "12345678901234"}});
  CHECK(c.env.states == 6);
  CHECK(c.learner.hidden == 8);
  CHECK(c.strategies == std::vector<StrategyKind>{StrategyKind::CoAct, StrategyKind::Ucb});
  REQUIRE(c.epsilons.size() == 3);
  CHECK(c.epsilons[2] == 0.3);
  CHECK(c.protocol.iterations == 5);
  CHECK(c.master_seed == 12345678901234ULL);
  CHECK(c.effective_alpha() == 0.1);

  CHECK(parse_real_list("0.15:0.25:0.025") == d.epsilons);
  CHECK(parse_real_list("0.2") == std::vector<double>{0.2});

  try {
    ExperimentConfig::from_settings(
        {{"iterations", "0"}, {"seeds", "x"}, {"epsilon", "1.5"}, {"colour", "blue"}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    // every problem reported, not just the first
    CHECK(e.problems().size() >= 3);
    const std::string msg = e.what();
    CHECK(msg.find("seeds") != std::string::npos);
    CHECK(msg.find("colour") != std::string::npos);
  }
  CHECK_THROWS_AS(ExperimentConfig::from_settings({{"strategies", ""}}), ConfigError);
}

TEST_CASE("run csv round trip") {
  const std::vector<RunRow> rows{row(0, "coact", 0.15, 1, 0, 0.1),
                                 row(1, "ucb", 0.2, 2, 11, std::numeric_limits<double>::quiet_NaN())};
  std::stringstream ss;
  write_run_csv(ss, rows);
  const std::string text = ss.str();
  CHECK(text.rfind(std::string(kRunCsvHeader) + "\n", 0) == 0);
  CHECK(text.find("0,coact,0.15,1,0,0.1,100\n") != std::string::npos);
  CHECK(text.find("nan") != std::string::npos);
  const auto back = read_run_csv(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0].strategy == "coact");
  CHECK(back[0].epsilon == 0.15);
  CHECK(std::isnan(back[1].mean_td));
  CHECK(back[1].env_steps == 200);

  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(11.0) == "11");
  CHECK(format_real(1.0 / 3.0) == "0.3333333333333333");
}

TEST_CASE("malformed csv names the line") {
  auto fails_on = [](const std::string& text, std::size_t line) {
    std::istringstream in(text);
    try {
      read_run_csv(in);
    } catch (const CsvParseError& e) {
      return e.line() == line;
    }
    return false;
  };
  const std::string h = std::string(kRunCsvHeader) + "\n";
  CHECK(fails_on("seed,strategy\n", 1));
  CHECK(fails_on(h + "0,coact,0.2,1,0,0,100\n0,coact,0.2,2,0\n", 3));
  CHECK(fails_on(h + "0,coact,abc,1,0,0,100\n", 2));
  CHECK(fails_on(h + "-1,coact,0.2,1,0,0,100\n", 2));
  CHECK(fails_on("", 1));
}

TEST_CASE("percentile and aggregate") {
  const std::vector<double> v{1, 2, 3, 4, 5};
  CHECK(percentile(v, 0.5) == 3.0);
  CHECK(percentile(v, 0.8) == doctest::Approx(4.2));
  CHECK(percentile(v, 0.2) == doctest::Approx(1.8));
  CHECK(percentile({7}, 0.8) == 7.0);
  CHECK(percentile({5, 1, 4, 2, 3}, 0.8) == doctest::Approx(4.2));
  CHECK_THROWS(percentile({}, 0.5));
  CHECK(parse_statistic("percentile-80") == Statistic::Percentile80);
  CHECK_THROWS(parse_statistic("mean"));

  std::vector<RunRow> same;
  for (std::size_t k = 0; k < 6; ++k) same.push_back(row(k, "coact", 0.2, 1, 4.5, 0.25));
  const auto r = aggregate(same, Statistic::Median, {"strategy"});
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].value == 4.5);
  CHECK(r.rows[0].standard_error == 0.0);
  CHECK(r.rows[0].count == 6);
  CHECK(r.rows[1].column == "mean_td");
  CHECK(r.warnings.empty());

  std::vector<RunRow> mixed;
  for (std::size_t k = 0; k < 5; ++k) mixed.push_back(row(k, "coact", 0.2, 1, k + 1.0, 0.1));
  mixed.push_back(row(0, "ucb", 0.2, 1, 1.0, std::numeric_limits<double>::quiet_NaN()));
  const auto m = aggregate(mixed, Statistic::Percentile80, {"strategy"}, 1000, 3);
  CHECK(m.rows[0].key == std::vector<std::string>{"coact"});
  CHECK(m.rows[0].value == doctest::Approx(4.2));
  CHECK(m.rows[0].standard_error > 0.0);
  // ucb has no finite TD values: that group is dropped with a warning
  CHECK(m.rows.size() == 3);
  REQUIRE(m.warnings.size() == 1);
  CHECK(m.warnings[0].find("ucb") != std::string::npos);
  const auto again = aggregate(mixed, Statistic::Percentile80, {"strategy"}, 1000, 3);
  CHECK(again.rows[0].standard_error == m.rows[0].standard_error);
  CHECK_THROWS(aggregate(mixed, Statistic::Median, {"colour"}));

  std::ostringstream out;
  write_summary_csv(out, m);
  CHECK(out.str().rfind("strategy,column,statistic,value,se,n\ncoact,eval_return,percentile-80,4.2,", 0) ==
        0);
}

TEST_CASE("seed derivation is positional") {
  CHECK(init_seed(1, 0) != init_seed(1, 1));
  CHECK(init_seed(1, 0) != init_seed(2, 0));
  CHECK(run_seed(5, 0, 1, 2) != run_seed(5, 1, 0, 2));
  CHECK(run_seed(5, 0, 1, 2) == run_seed(5, 0, 1, 2));
}

TEST_CASE("sweep shape, bounds and ordering") {
  const auto c = small_sweep();
  const auto rows = run_sweep(c, 2);
  CHECK(rows.size() == 3 * 5 * 3 * 12);
  std::size_t i = 0;
  for (auto strat : c.strategies)
    for (double eps : c.epsilons)
      for (std::size_t seed = 0; seed < 3; ++seed)
        for (std::size_t it = 1; it <= 12; ++it, ++i) {
          CHECK(rows[i].strategy == to_string(strat));
          CHECK(rows[i].epsilon == eps);
          CHECK(rows[i].seed == seed);
          CHECK(rows[i].iteration == it);
          CHECK(rows[i].eval_return >= 0.0);
          CHECK(rows[i].eval_return <= 11.0);
        }
  // ucb ignores epsilon: its block repeats under every epsilon
  const std::size_t block = 3 * 12;
  const std::size_t ucb = 2 * 5 * block;
  for (std::size_t e = 1; e < 5; ++e)
    for (std::size_t k = 0; k < block; ++k) {
      CHECK(rows[ucb + e * block + k].eval_return == rows[ucb + k].eval_return);
      CHECK(rows[ucb + e * block + k].env_steps == rows[ucb + k].env_steps);
    }
}

TEST_CASE("sweep output does not depend on the worker count") {
  auto c = small_sweep();
  c.learner = LearnerSpec::parse("quantile:4");
  std::ostringstream one, many;
  write_run_csv(one, run_sweep(c, 1));
  write_run_csv(many, run_sweep(c, 7));
  CHECK(one.str() == many.str());
}

TEST_CASE("a cell depends only on its own indices") {
  auto c = small_sweep();
  const Mdp mdp = c.build_mdp();
  const RunRecord cell = run_cell(c, mdp, 0, 2, 1);
  c.seeds = 5;
  c.epsilons.push_back(0.3);
  CHECK(run_cell(c, mdp, 0, 2, 1) == cell);
}

TEST_CASE("full chain grid has 3*5*20*iterations rows") {
  ExperimentConfig c;
  c.protocol.iterations = 10;
  CHECK(run_sweep(c).size() == 3 * 5 * 20 * 10);
}

TEST_CASE("sweep writes runs.csv atomically and reproducibly") {
  const auto dir = std::filesystem::temp_directory_path() / "coact_sweep_test";
  std::filesystem::remove_all(dir);
  auto c = small_sweep();
  c.out_dir = (dir / "a").string();
  const std::string pa = run_sweep_to_csv(c);
  c.out_dir = (dir / "b").string();
  const std::string pb = run_sweep_to_csv(c);
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  CHECK(slurp(pa) == slurp(pb));
  CHECK_FALSE(std::filesystem::exists(pa + ".tmp"));
  CHECK(read_run_csv_file(pa).size() == 3 * 5 * 3 * 12);
  std::filesystem::remove_all(dir);
}

TEST_CASE("verify suite config") {
  const auto v = VerifySuiteConfig::from_settings({{"samples", "500"}, {"prop1_bias", "0,-1,0,0"}});
  CHECK(v.samples == 500);
  REQUIRE(v.prop1_bias.has_value());
  CHECK(*v.prop1_bias == std::vector<double>{0, -1, 0, 0});
  CHECK_THROWS_AS(VerifySuiteConfig::from_settings({{"samples", "10"}}), ConfigError);
  CHECK_THROWS_AS(VerifySuiteConfig::from_settings({{"prop1_bias", "0,1"}}), ConfigError);
  CHECK_THROWS_AS(VerifySuiteConfig::from_settings({{"nope", "1"}}), ConfigError);

  VerifySuiteConfig small;
  small.samples = 2000;
  small.prop1_samples = 2000;
  std::ostringstream log;
  const auto r = run_verify_suite(small, log);
  CHECK(r.csv_rows.size() == 5);
  for (const auto& line : r.csv_rows) CHECK(line.find(",pass") != std::string::npos);
  CHECK(r.all_pass);
  small.prop1_bias = std::vector<double>{0, -1, 0, 0};
  const auto b = run_verify_suite(small, log);
  CHECK(b.csv_rows.size() == 6);
  CHECK_FALSE(b.all_pass);
}
