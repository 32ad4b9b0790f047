#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "bfholes/errors.hpp"
#include "bfholes/report.hpp"

using namespace bfholes;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<FitPoint> planted(double k, double c, std::initializer_list<double> radii) {
  std::vector<FitPoint> pts;
  for (double r : radii) {
    const double p = std::exp(-c * std::pow(r, k));
    pts.push_back({r, p, p * 0.95, p * 1.05, 100000});
  }
  return pts;
}

}  // namespace

TEST_CASE("empty table gives a header-only CSV") {
  Table t{estimate_columns(), {}};
  CHECK(to_csv(t) ==
        "experiment,kind,m,r,spacing_or_delta,trials,p_hat,ci_low,ci_high,sampler,seed_master,seed_trial_base,"
        "plan_degree,uncertain_fraction\n");
  CHECK(to_json(t) == "[]\n");
}

TEST_CASE("json rows share keys") {
  Table t{{"a", "b", "c"}, {}};
  for (int i = 0; i < 3; ++i) t.add_row({std::string("x"), 0.1 * i, std::int64_t{i}});
  const auto j = nlohmann::json::parse(to_json(t));
  REQUIRE(j.size() == 3);
  for (const auto& o : j) {
    CHECK(o.size() == 3);
    CHECK(o.contains("a"));
    CHECK(o.contains("b"));
    CHECK(o.contains("c"));
  }
  CHECK_THROWS_AS(t.add_row({std::string("short")}), InvalidArgument);
}

TEST_CASE("CSV round trip keeps every bit") {
  Table t{{"name", "value", "count", "flag"}, {}};
  const std::vector<double> vals = {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, std::nextafter(1.0, 2.0), 0.0};
  for (std::size_t i = 0; i < vals.size(); ++i)
    t.add_row({std::string(i % 2 ? "with,comma" : "say \"hi\""), vals[i], std::uint64_t{i} << 40, i % 2 == 0});
  const ParsedCsv p = parse_csv(to_csv(t));
  CHECK(p.columns == t.columns);
  REQUIRE(p.rows.size() == vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    CHECK(std::stod(p.rows[i][1]) == vals[i]);
    CHECK(std::stoull(p.rows[i][2]) == (std::uint64_t{i} << 40));
    CHECK(p.rows[i][0] == std::get<std::string>(t.rows[i][0]));
  }
  CHECK(format_cell(0.1) == "0.10000000000000001");
}

TEST_CASE("emit_report writes the sidecar and echoes bad paths") {
  Table t{{"a"}, {}};
  t.add_row({1.5});
  const std::string path = "bfholes_report_test.csv";
  emit_report(t, Format::csv, path, {"demo", "abc", 0.25});
  CHECK(slurp(path) == "a\n1.5\n");
  const auto meta = nlohmann::json::parse(slurp(path + ".meta.json"));
  CHECK(meta["config_hash"] == "abc");
  CHECK(meta["version"] == BFHOLES_VERSION);
  CHECK(meta["rows"] == 1);
  std::remove(path.c_str());
  std::remove((path + ".meta.json").c_str());
  try {
    emit_report(t, Format::csv, "/nonexistent_dir/x.csv", {});
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(e.path() == "/nonexistent_dir/x.csv");
    CHECK(std::string(e.what()).find("/nonexistent_dir/x.csv") != std::string::npos);
  }
}

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("draw files round trip") {
  PlanOptions o;
  o.omega_floor = false;
  const auto plan = truncation_plan(2, 1.5, 1e-9, o);
  TiltSpec t;
  t.m = 2;
  t.shift_alpha0 = 1.0;
  t.band_cutoff = 3;
  const auto d = tilted_draw(NormalStream({8, 3, StreamRole::coefficients}), plan, t);
  std::stringstream ss;
  write_draw(ss, d);
  const auto back = read_draw(ss);
  CHECK(back.values == d.values);
  CHECK(back.log_weight == d.log_weight);
  CHECK(back.stream == d.stream);
  CHECK(back.plan.degree == d.plan.degree);
  CHECK(back.plan.tail_bound == d.plan.tail_bound);
  std::stringstream bad("1.0\n2.0\n");
  CHECK_THROWS_AS(read_draw(bad), InvalidArgument);
}

TEST_CASE("planted exponents are recovered") {
  CHECK(fit_decay_exponent(planted(1.0, 2.0, {1, 1.5, 2, 2.5, 3})).slope == doctest::Approx(1.0).epsilon(0.01));
  CHECK(fit_decay_exponent(planted(2.0, 0.3, {1, 1.5, 2, 2.5, 3})).slope == doctest::Approx(2.0).epsilon(0.01));
  const auto f4 = fit_decay_exponent(planted(4.0, 1.0, {0.8, 1.0, 1.2, 1.4}));
  CHECK(f4.slope == doctest::Approx(4.0).epsilon(0.01));
  CHECK(f4.intercept == doctest::Approx(0.0).epsilon(1e-9).scale(1.0));
  CHECK(f4.r2_fit == doctest::Approx(1.0));
  CHECK(f4.slope_ci.first <= 4.0);
  CHECK(f4.slope_ci.second >= 4.0);
}

TEST_CASE("fit input filtering") {
  auto pts = planted(2.0, 0.5, {1, 2, 3});
  pts.push_back({4.0, 0.0, 0.0, 3e-5, 100000});
  pts.push_back({5.0, 1e-3, 1e-4, 5e-3, 1000});
  const auto f = fit_decay_exponent(pts);
  REQUIRE(f.zero_hit_bounds.size() == 1);
  CHECK(f.zero_hit_bounds[0].first == 4.0);
  CHECK(f.zero_hit_bounds[0].second == doctest::Approx(1.0 - std::pow(0.025, 1e-5)));
  CHECK(f.rejected_radii == std::vector<double>{5.0});
  CHECK(f.radii.size() == 3);
  CHECK_THROWS_AS(fit_decay_exponent(planted(2.0, 0.5, {1, 2})), InsufficientData);
  // Zero-width intervals fall back to an unweighted fit.
  std::vector<FitPoint> exact;
  for (double r : {1.0, 2.0, 3.0}) exact.push_back({r, std::exp(-r * r), std::exp(-r * r), std::exp(-r * r), 10});
  CHECK(fit_decay_exponent(exact, 1.0).slope == doctest::Approx(2.0));
}
