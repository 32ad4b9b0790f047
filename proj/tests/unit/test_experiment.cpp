#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bfholes/errors.hpp"
#include "bfholes/experiment.hpp"

using namespace bfholes;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> keys_of(const std::string& json) {
  try {
    parse_config(json);
  } catch (const ConfigError& e) {
    return e.keys();
  }
  return {};
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config(R"({"experiment":"hole_ladder","m":1,"r_values":[1,2,3],"trials":100,"master_seed":5})");
  CHECK(c.r_values == std::vector<double>{1, 2, 3});
  CHECK(c.trials == 100);
  CHECK(keys_of(R"({"bogus":1,"r_values":[1],"other":2})") == std::vector<std::string>{"bogus", "other"});
  CHECK(keys_of(R"({"r_values":[2,1]})") == std::vector<std::string>{"r_values"});
  CHECK(keys_of(R"({"r_values":[1],"trials":0})") == std::vector<std::string>{"trials"});
  CHECK(keys_of(R"({"r_values":[1],"m":"two"})") == std::vector<std::string>{"m"});
  CHECK(keys_of(R"({"r_values":[1,2],"band_cutoff":[1,2,3]})") == std::vector<std::string>{"band_cutoff"});
  CHECK(keys_of(R"({"r_values":[1],"format":"xml","sampler":"magic"})") ==
        std::vector<std::string>{"sampler", "format"});
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK(parse_config(R"({"experiment":"audits"})").r_values.empty());
}

TEST_CASE("config hash ignores the output path only") {
  ExperimentConfig a;
  a.r_values = {1.0};
  ExperimentConfig b = a;
  b.out = "elsewhere.csv";
  CHECK(config_hash(a) == config_hash(b));
  b.master_seed = 1;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("hole ladder: one row per radius, identical bytes across runs and worker counts") {
  ExperimentConfig c;
  c.r_values = {1.0, 2.0, 3.0};
  c.trials = 2000;
  c.master_seed = 11;
  c.out = "bfholes_ladder_a.csv";
  setenv("BFHOLES_THREADS", "1", 1);
  run_experiment(c);
  c.out = "bfholes_ladder_b.csv";
  setenv("BFHOLES_THREADS", "6", 1);
  const auto res = run_experiment(c);
  unsetenv("BFHOLES_THREADS");
  CHECK(res.table.rows.size() == 3);
  const std::string a = slurp("bfholes_ladder_a.csv"), b = slurp("bfholes_ladder_b.csv");
  CHECK(a == b);
  CHECK(a.find("hole_ladder,real_hole,1,1,") != std::string::npos);
  CHECK(slurp("bfholes_ladder_a.csv.meta.json").find(res.config_hash) != std::string::npos);
  for (const char* f : {"bfholes_ladder_a.csv", "bfholes_ladder_b.csv", "bfholes_ladder_a.csv.meta.json",
                        "bfholes_ladder_b.csv.meta.json"})
    std::remove(f);
}

TEST_CASE("audits include the lambda = 1 violation") {
  ExperimentConfig c;
  c.experiment = "audits";
  const auto t = run_experiment(c).table;
  bool found = false;
  for (const auto& row : t.rows) {
    if (std::get<double>(row[1]) == 1.0 && std::get<std::string>(row[0]).rfind("P(|a|>=l) <= e^", 0) == 0) {
      found = true;
      CHECK(std::get<std::string>(row[5]) == "violated");
      CHECK(std::get<double>(row[4]) == doctest::Approx(0.317311).epsilon(1e-6));
    }
  }
  CHECK(found);
}

TEST_CASE("other experiments run") {
  ExperimentConfig g;
  g.experiment = "growth_stats";
  g.r_values = {2.0};
  g.trials = 20;
  CHECK(run_experiment(g).table.rows.size() == 5);
  ExperimentConfig b;
  b.experiment = "bounds_table";
  b.r_values = {2.0, 4.0};
  b.oracle_trials = 1000;
  CHECK(run_experiment(b).table.rows.size() == 2);
  ExperimentConfig o;
  o.experiment = "omega_verify";
  o.r_values = {1.0};
  o.trials = 20;
  const auto ot = run_experiment(o).table;
  CHECK(ot.rows.size() == 2);
  for (const auto& row : ot.rows) CHECK(std::get<std::uint64_t>(row[4]) == 0);
  ExperimentConfig cr;
  cr.experiment = "crowding_ladder";
  cr.r_values = {2.0};
  cr.trials = 50;
  CHECK(run_experiment(cr).table.rows.size() == 2);
}

TEST_CASE("fit experiment reads an estimates CSV") {
  ExperimentConfig c;
  c.r_values = {0.5, 1.0, 1.5};
  c.trials = 4000;
  c.out = "bfholes_fit_input.csv";
  run_experiment(c);
  ExperimentConfig f;
  f.experiment = "fit";
  f.input = c.out;
  const auto t = run_experiment(f).table;
  REQUIRE(t.rows.size() == 1);
  CHECK(std::get<std::string>(t.rows[0][0]) == "real_hole");
  f.input = "does_not_exist.csv";
  CHECK_THROWS_AS(run_experiment(f), IoError);
  std::remove("bfholes_fit_input.csv");
  std::remove("bfholes_fit_input.csv.meta.json");
}

TEST_CASE("sample experiment writes readable draws") {
  ExperimentConfig c;
  c.experiment = "sample";
  c.r_values = {1.0};
  c.trials = 3;
  c.out = "bfholes_draws.txt";
  run_experiment(c);
  const auto draws = read_draws(slurp(c.out));
  REQUIRE(draws.size() == 3);
  CHECK(draws[2].stream.trial_id == 2);
  std::remove("bfholes_draws.txt");
}
