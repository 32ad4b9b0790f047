#include "bfholes/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "bfholes/census.hpp"
#include "bfholes/comparison.hpp"
#include "bfholes/errors.hpp"
#include "bfholes/field.hpp"
#include "bfholes/multiindex.hpp"
#include "bfholes/parallel.hpp"
#include "bfholes/rare_events.hpp"

namespace bfholes {

namespace {

using nlohmann::json;

const std::vector<std::string> kExperiments = {"hole_ladder", "crowding_ladder", "growth_stats", "bounds_table",
                                               "audits",      "omega_verify",    "fit",          "sample"};

template <class T>
void read_key(const json& j, const char* key, T& out, std::vector<std::string>& bad) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    bad.emplace_back(key);
  }
}

template <class T>
void read_scalar_or_list(const json& j, const char* key, std::vector<T>& out, std::vector<std::string>& bad) {
  if (!j.contains(key)) return;
  try {
    const json& v = j.at(key);
    if (v.is_array()) {
      out = v.get<std::vector<T>>();
      if (out.empty()) bad.emplace_back(key);
    } else {
      out = {v.get<T>()};
    }
  } catch (const json::exception&) {
    bad.emplace_back(key);
  }
}

template <class T>
T per_r(const std::vector<T>& v, std::size_t i) {
  return v.size() == 1 ? v[0] : v[i];
}

json to_json_object(const ExperimentConfig& c) {
  json j;
  j["experiment"] = c.experiment;
  j["m"] = c.m;
  j["r_values"] = c.r_values;
  j["trials"] = c.trials;
  j["master_seed"] = c.master_seed;
  j["sampler"] = c.sampler;
  j["shift_alpha0"] = c.shift_alpha0;
  j["band_scale"] = c.band_scale;
  j["band_cutoff"] = c.band_cutoff;
  j["symmetric_alpha0"] = c.symmetric_alpha0;
  j["band_profile"] = c.band_profile;
  j["kind"] = c.kind;
  j["grid_step"] = c.grid_step;
  j["delta"] = c.delta;
  j["crowd_center"] = c.crowd_center ? json(*c.crowd_center) : json(nullptr);
  j["spacing"] = c.spacing;
  j["lattice_variant"] = c.lattice_variant;
  j["epsilon"] = c.epsilon;
  j["oracle_trials"] = c.oracle_trials;
  j["input"] = c.input;
  j["format"] = c.format;
  j["fit_threshold"] = c.fit_threshold;
  return j;
}

Sampler make_sampler(const ExperimentConfig& cfg, EventKind kind, double r, std::size_t i) {
  if (cfg.sampler == "plain") return Sampler::plain();
  const TiltKind tk = kind == EventKind::complex_hole ? TiltKind::complex_hole : TiltKind::real_hole;
  TiltSpec t = TiltSpec::proof_default(tk, cfg.m, r, per_r(cfg.shift_alpha0, i));
  const int cutoff = per_r(cfg.band_cutoff, i);
  if (cutoff >= 0) {
    t.band_cutoff = cutoff;
    t.band_scale = per_r(cfg.band_scale, i);
  }
  t.symmetric_alpha0 = cfg.symmetric_alpha0;
  t.envelope_profile = cfg.band_profile == "envelope";
  return Sampler::tilted(t);
}

std::vector<EventKind> event_kinds(const ExperimentConfig& cfg) {
  if (cfg.experiment == "hole_ladder") {
    return {cfg.kind.empty() ? EventKind::real_hole : event_kind_from_string(cfg.kind)};
  }
  if (cfg.kind.empty() || cfg.kind == "both") return {EventKind::overcrowd, EventKind::undercrowd};
  return {event_kind_from_string(cfg.kind)};
}

Table run_ladder(const ExperimentConfig& cfg) {
  Table t{estimate_columns(), {}};
  for (std::size_t i = 0; i < cfg.r_values.size(); ++i) {
    const double r = cfg.r_values[i];
    for (EventKind kind : event_kinds(cfg)) {
      EventSpec ev;
      ev.kind = kind;
      ev.m = cfg.m;
      ev.r = r;
      ev.delta = cfg.delta;
      if (cfg.crowd_center) ev.center = *cfg.crowd_center;
      ev.grid_step = cfg.grid_step;
      ev.epsilon = cfg.epsilon;
      const Sampler s = make_sampler(cfg, kind, r, i);
      // Each rung gets its own block of trial ids.
      const std::uint64_t base = static_cast<std::uint64_t>(i) * cfg.trials;
      const auto e = estimate_event_probability(ev, cfg.trials, cfg.master_seed, s, base);
      const bool crowd = kind == EventKind::overcrowd || kind == EventKind::undercrowd;
      t.add_row(estimate_row(cfg.experiment, to_string(kind), cfg.m, r, crowd ? cfg.delta : cfg.grid_step, e));
    }
  }
  return t;
}

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t n = 0;
  int nodes = 0;
  int excluded = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++n;
  }
  void merge(const Moments& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    n += o.n;
    nodes = std::max(nodes, o.nodes);
    excluded += o.excluded;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN(); }
  double std_error() const {
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    const double dn = static_cast<double>(n);
    const double var = std::max(0.0, (sum_sq - sum * sum / dn) / (dn - 1.0));
    return std::sqrt(var / dn);
  }
};

Table run_growth(const ExperimentConfig& cfg) {
  Table t{{"experiment", "statistic", "m", "r", "trials", "mean", "std_error", "mean_over_r2", "max_nodes",
           "excluded_nodes", "seed_master", "seed_trial_base", "plan_degree"},
          {}};
  const bool one = cfg.m == 1;
  const std::vector<std::string> stats =
      one ? std::vector<std::string>{"max_log_modulus", "sphere_average_log", "weighted_value", "zero_count",
                                     "integrated_count"}
          : std::vector<std::string>{"max_log_modulus", "sphere_average_log"};
  for (std::size_t i = 0; i < cfg.r_values.size(); ++i) {
    const double r = cfg.r_values[i];
    PlanOptions opts;
    opts.omega_floor = false;
    const TruncationPlan plan = truncation_plan(cfg.m, r, cfg.epsilon, opts);
    const std::uint64_t base = static_cast<std::uint64_t>(i) * cfg.trials;
    const std::size_t chunks = (cfg.trials + kTrialChunk - 1) / kTrialChunk;
    std::vector<std::vector<Moments>> slots(chunks, std::vector<Moments>(stats.size()));
    parallel_for_chunks(chunks, [&](std::size_t c) {
      auto& mom = slots[c];
      const std::uint64_t lo = c * kTrialChunk;
      const std::uint64_t hi = std::min<std::uint64_t>(cfg.trials, lo + kTrialChunk);
      for (std::uint64_t k = lo; k < hi; ++k) {
        const NormalStream stream({cfg.master_seed, base + k, StreamRole::coefficients});
        const CoefficientDraw d = draw_coefficients(stream, plan);
        const auto mx = max_log_modulus(d, r);
        mom[0].add(mx.value);
        mom[0].nodes = std::max(mom[0].nodes, mx.nodes);
        const auto av = sphere_average_log(d, r);
        mom[1].add(av.value);
        mom[1].nodes = std::max(mom[1].nodes, av.nodes);
        mom[1].excluded += av.excluded_nodes;
        if (one) {
          const auto w = max_log_weighted_real(d, r);
          mom[2].add(w.value);
          mom[2].nodes = std::max(mom[2].nodes, w.nodes);
          const auto rho = zero_moduli(d, r);
          mom[3].add(static_cast<double>(rho.size()));
          double integrated = 0.0;
          for (double x : rho) integrated += std::log(r / x);
          mom[4].add(integrated);
        }
      }
    });
    std::vector<Moments> total(stats.size());
    for (const auto& s : slots)
      for (std::size_t k = 0; k < stats.size(); ++k) total[k].merge(s[k]);
    for (std::size_t k = 0; k < stats.size(); ++k) {
      t.add_row({std::string("growth_stats"), stats[k], std::int64_t{cfg.m}, r, cfg.trials, total[k].mean(),
                 total[k].std_error(), total[k].mean() / (r * r), std::int64_t{total[k].nodes},
                 std::int64_t{total[k].excluded}, cfg.master_seed, base, std::int64_t{plan.degree}});
    }
  }
  return t;
}

Table run_bounds(const ExperimentConfig& cfg) {
  Table t{{"m", "r", "spacing", "variant", "n", "log_lower", "log_upper", "pair_sum", "oracle_p", "oracle_ci_low",
           "oracle_ci_high", "oracle_exact", "chain_bound", "corrected_chain_bound", "aggregation_holds"},
          {}};
  const auto variant = lattice_variant_from_string(cfg.lattice_variant);
  for (double r : cfg.r_values) {
    const LatticeSpec lat = build_lattice(cfg.m, r, cfg.spacing, variant);
    const LiShaoBounds b = li_shao_bounds(lat);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    OrthantEstimate o{nan, nan, nan, 0, false};
    if (lat.size() <= 25 && lat.covariance.size() > 0) {
      o = orthant_probability_oracle(lat.covariance, cfg.oracle_trials, cfg.master_seed);
    }
    double chain = nan;
    double corrected = nan;
    bool holds = true;
    if (cfg.spacing == 2.0) {
      const ChainBound cb = upper_chain_bound(r, cfg.m);
      chain = cb.bound;
      corrected = cb.corrected_bound;
      holds = cb.aggregation_holds;
    }
    t.add_row({std::int64_t{cfg.m}, r, cfg.spacing, std::string(to_string(variant)),
               static_cast<std::uint64_t>(b.n), b.lower, b.upper, b.pair_sum, o.p, o.ci_low, o.ci_high, o.exact,
               chain, corrected, holds});
  }
  return t;
}

Table run_audits(const ExperimentConfig& cfg) {
  Table t{{"claim", "input", "claimed_lower", "claimed_upper", "reference_value", "verdict", "margin"}, {}};
  auto add = [&t](const BoundAudit& a) {
    t.add_row({a.claim, a.input, a.claimed_lower, a.claimed_upper, a.reference_value, std::string(to_string(a.verdict)),
               a.margin});
  };
  for (int k = 5; k <= 100; ++k) {
    const double lambda = k / 10.0;
    const auto [ai, aii] = gaussian_tail_audit(lambda);
    add(ai);
    add(aii);
  }
  for (int k = 5; k <= 100; ++k) {
    const auto [ci, cii] = corrected_gaussian_tail_audit(k / 10.0);
    add(ci);
    add(cii);
  }
  const int mmax = std::max(cfg.m, 3);
  for (int m = 1; m <= mmax; ++m) {
    for (int d = 1; d <= 6; ++d) {
      std::vector<int> j(static_cast<std::size_t>(m), 1);
      j[0] = d;
      add(power_ratio_bound_audit(MultiIndex(j), m));
    }
  }
  return t;
}

std::vector<OmegaVariant> omega_variants(const ExperimentConfig& cfg) {
  if (cfg.kind.empty() || cfg.kind == "both") return {OmegaVariant::real, OmegaVariant::complex};
  if (cfg.kind == "real") return {OmegaVariant::real};
  if (cfg.kind == "complex") return {OmegaVariant::complex};
  throw ConfigError("omega_verify kind must be real, complex or both", {"kind"});
}

Table run_omega(const ExperimentConfig& cfg) {
  Table t{{"variant", "m", "r", "samples", "violations", "uncertain", "log_probability", "band_cutoff",
           "plan_degree", "seed_master"},
          {}};
  for (OmegaVariant v : omega_variants(cfg)) {
    if (v == OmegaVariant::complex && cfg.m != 1) continue;
    for (double r : cfg.r_values) {
      const OmegaSpec spec = OmegaSpec::proof_default(v, cfg.m, r);
      const auto res = verify_omega_implies_hole(spec, cfg.trials, cfg.master_seed);
      t.add_row({std::string(to_string(v)), std::int64_t{cfg.m}, r, res.samples, res.violations, res.uncertain,
                 omega_log_probability(spec), std::int64_t{spec.band_cutoff}, std::int64_t{res.plan_degree},
                 cfg.master_seed});
    }
  }
  return t;
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open input file", path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string join_pairs(const std::vector<std::pair<double, double>>& v) {
  std::string s;
  for (const auto& [a, b] : v) s += (s.empty() ? "" : ";") + format_cell(a) + ":" + format_cell(b);
  return s;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double a : v) s += (s.empty() ? "" : ";") + format_cell(a);
  return s;
}

Table run_fit(const ExperimentConfig& cfg) {
  const ParsedCsv csv = parse_csv(read_text(cfg.input));
  auto col = [&csv, &cfg](const std::string& name) {
    const auto it = std::find(csv.columns.begin(), csv.columns.end(), name);
    if (it == csv.columns.end()) throw IoError("estimate column '" + name + "' missing in", cfg.input);
    return static_cast<std::size_t>(it - csv.columns.begin());
  };
  const std::size_t ck = col("kind"), cm = col("m"), cr = col("r"), cp = col("p_hat"), cl = col("ci_low"),
                    ch = col("ci_high"), ct = col("trials");
  std::map<std::pair<std::string, int>, std::vector<FitPoint>> groups;
  for (const auto& row : csv.rows) {
    if (!cfg.kind.empty() && row[ck] != cfg.kind) continue;
    FitPoint p{std::stod(row[cr]), std::stod(row[cp]), std::stod(row[cl]), std::stod(row[ch]),
               std::stoull(row[ct])};
    groups[{row[ck], std::stoi(row[cm])}].push_back(p);
  }
  if (groups.empty()) throw InsufficientData("no estimate rows to fit in " + cfg.input);
  Table t{{"kind", "m", "points", "slope", "slope_ci_low", "slope_ci_high", "slope_se", "intercept", "r2_fit",
           "radii", "zero_hit_bounds", "rejected_radii"},
          {}};
  for (auto& [key, pts] : groups) {
    std::sort(pts.begin(), pts.end(), [](const FitPoint& a, const FitPoint& b) { return a.r < b.r; });
    const ExponentFit f = fit_decay_exponent(pts, cfg.fit_threshold);
    t.add_row({key.first, std::int64_t{key.second}, static_cast<std::uint64_t>(f.radii.size()), f.slope,
               f.slope_ci.first, f.slope_ci.second, f.slope_se, f.intercept, f.r2_fit, join(f.radii),
               join_pairs(f.zero_hit_bounds), join(f.rejected_radii)});
  }
  return t;
}

Table run_sample(const ExperimentConfig& cfg, std::string* draws_text) {
  Table t{{"trial_id", "m", "radius", "degree", "alpha_0", "log_weight", "sampler"}, {}};
  const double r = cfg.r_values.front();
  const EventKind kind = cfg.kind == "complex_hole" ? EventKind::complex_hole : EventKind::real_hole;
  const Sampler s = make_sampler(cfg, kind, r, 0);
  PlanOptions opts;
  opts.omega_floor = false;
  if (s.kind == Sampler::Kind::tilted) opts.min_degree = s.tilt.band_cutoff;
  const TruncationPlan plan = truncation_plan(cfg.m, r, cfg.epsilon, opts);
  std::ostringstream out;
  for (std::uint64_t k = 0; k < cfg.trials; ++k) {
    const NormalStream stream({cfg.master_seed, k, StreamRole::coefficients});
    const CoefficientDraw d =
        s.kind == Sampler::Kind::tilted ? tilted_draw(stream, plan, s.tilt) : draw_coefficients(stream, plan);
    write_draw(out, d);
    t.add_row({k, std::int64_t{cfg.m}, r, std::int64_t{plan.degree}, d.values[0], d.log_weight, s.describe()});
  }
  *draws_text = out.str();
  return t;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "experiment", "m",         "r_values",      "trials",    "master_seed", "sampler",
      "shift_alpha0", "band_scale", "band_cutoff", "symmetric_alpha0", "band_profile", "kind", "grid_step",
      "delta",      "crowd_center", "spacing",     "lattice_variant", "epsilon", "oracle_trials",
      "input",      "out",       "format",        "fit_threshold"};
  return keys;
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what(), {});
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object", {});
  std::vector<std::string> unknown;
  const auto& keys = config_keys();
  for (const auto& [k, v] : j.items()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) unknown.push_back(k);
  }
  if (!unknown.empty()) {
    std::string msg = "unknown config keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw ConfigError(msg, unknown);
  }
  ExperimentConfig c;
  std::vector<std::string> bad;
  read_key(j, "experiment", c.experiment, bad);
  read_key(j, "m", c.m, bad);
  read_scalar_or_list(j, "r_values", c.r_values, bad);
  read_key(j, "trials", c.trials, bad);
  read_key(j, "master_seed", c.master_seed, bad);
  read_key(j, "sampler", c.sampler, bad);
  read_scalar_or_list(j, "shift_alpha0", c.shift_alpha0, bad);
  read_scalar_or_list(j, "band_scale", c.band_scale, bad);
  read_scalar_or_list(j, "band_cutoff", c.band_cutoff, bad);
  read_key(j, "symmetric_alpha0", c.symmetric_alpha0, bad);
  read_key(j, "band_profile", c.band_profile, bad);
  read_key(j, "kind", c.kind, bad);
  read_key(j, "grid_step", c.grid_step, bad);
  read_key(j, "delta", c.delta, bad);
  if (j.contains("crowd_center") && !j["crowd_center"].is_null()) {
    double v = 0.0;
    read_key(j, "crowd_center", v, bad);
    c.crowd_center = v;
  }
  read_key(j, "spacing", c.spacing, bad);
  read_key(j, "lattice_variant", c.lattice_variant, bad);
  read_key(j, "epsilon", c.epsilon, bad);
  read_key(j, "oracle_trials", c.oracle_trials, bad);
  read_key(j, "input", c.input, bad);
  read_key(j, "out", c.out, bad);
  read_key(j, "format", c.format, bad);
  read_key(j, "fit_threshold", c.fit_threshold, bad);
  if (!bad.empty()) {
    std::string msg = "config keys with the wrong type:";
    for (const auto& k : bad) msg += " " + k;
    throw ConfigError(msg, bad);
  }
  validate_config(c);
  return c;
}

void validate_config(const ExperimentConfig& c) {
  std::vector<std::string> bad;
  std::string why;
  auto fail = [&](const char* key, const std::string& reason) {
    bad.emplace_back(key);
    why += (why.empty() ? "" : "; ") + std::string(key) + ": " + reason;
  };
  if (std::find(kExperiments.begin(), kExperiments.end(), c.experiment) == kExperiments.end())
    fail("experiment", "unknown experiment '" + c.experiment + "'");
  if (c.m < 1) fail("m", "must be >= 1");
  const bool needs_r = c.experiment != "audits" && c.experiment != "fit";
  if (needs_r && c.r_values.empty()) fail("r_values", "must not be empty");
  for (std::size_t i = 0; i < c.r_values.size(); ++i) {
    if (!std::isfinite(c.r_values[i]) || c.r_values[i] < 0.0 || (i > 0 && !(c.r_values[i] > c.r_values[i - 1]))) {
      fail("r_values", "must be finite, nonnegative and strictly increasing");
      break;
    }
  }
  if (c.trials < 1) fail("trials", "must be >= 1");
  if (c.sampler != "plain" && c.sampler != "tilted") fail("sampler", "must be plain or tilted");
  const std::size_t nr = c.r_values.size();
  auto check_len = [&](const char* key, std::size_t n) {
    if (n != 1 && n != nr) fail(key, "needs one value or one per r");
  };
  check_len("shift_alpha0", c.shift_alpha0.size());
  check_len("band_scale", c.band_scale.size());
  check_len("band_cutoff", c.band_cutoff.size());
  for (double s : c.shift_alpha0)
    if (!(s >= 0.0)) fail("shift_alpha0", "must be nonnegative");
  for (double s : c.band_scale)
    if (!(s > 0.0 && (s <= 1.0 || c.band_profile == "envelope")))
      fail("band_scale", "must lie in (0, 1], or be positive with the envelope profile");
  if (c.band_profile != "flat" && c.band_profile != "envelope") fail("band_profile", "must be flat or envelope");
  for (int k : c.band_cutoff)
    if (k < -1) fail("band_cutoff", "must be >= 0, or -1 for the proof-event cutoff");
  if (c.grid_step < 0.0) fail("grid_step", "must be nonnegative");
  if (!(c.delta >= 0.0)) fail("delta", "must be nonnegative");
  if (!(c.spacing > 0.0)) fail("spacing", "must be positive");
  if (c.lattice_variant != "symmetric" && c.lattice_variant != "nonnegative")
    fail("lattice_variant", "must be symmetric or nonnegative");
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) fail("epsilon", "must lie in (0, 1)");
  if (c.oracle_trials < 1) fail("oracle_trials", "must be >= 1");
  if (c.format != "csv" && c.format != "json") fail("format", "must be csv or json");
  if (!(c.fit_threshold > 0.0)) fail("fit_threshold", "must be positive");
  if (c.experiment == "fit" && c.input.empty()) fail("input", "fit needs an estimates CSV");
  if (c.experiment == "hole_ladder" && !c.kind.empty() && c.kind != "real_hole" && c.kind != "complex_hole")
    fail("kind", "hole_ladder kind must be real_hole or complex_hole");
  if (c.experiment == "crowding_ladder" && !c.kind.empty() && c.kind != "overcrowd" && c.kind != "undercrowd" &&
      c.kind != "both")
    fail("kind", "crowding_ladder kind must be overcrowd, undercrowd or both");
  if (c.experiment == "omega_verify" && !c.kind.empty() && c.kind != "real" && c.kind != "complex" &&
      c.kind != "both")
    fail("kind", "omega_verify kind must be real, complex or both");
  if (!bad.empty()) throw ConfigError("invalid config: " + why, bad);
}

std::string canonical_config(const ExperimentConfig& cfg) { return to_json_object(cfg).dump(); }

std::string config_hash(const ExperimentConfig& cfg) { return fnv1a_hex(canonical_config(cfg)); }

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult res;
  res.config_hash = config_hash(cfg);
  std::string draws;
  if (cfg.experiment == "hole_ladder" || cfg.experiment == "crowding_ladder") {
    res.table = run_ladder(cfg);
  } else if (cfg.experiment == "growth_stats") {
    res.table = run_growth(cfg);
  } else if (cfg.experiment == "bounds_table") {
    res.table = run_bounds(cfg);
  } else if (cfg.experiment == "audits") {
    res.table = run_audits(cfg);
  } else if (cfg.experiment == "omega_verify") {
    res.table = run_omega(cfg);
  } else if (cfg.experiment == "fit") {
    res.table = run_fit(cfg);
  } else {
    res.table = run_sample(cfg, &draws);
  }
  res.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!cfg.out.empty()) {
    const ReportMeta meta{cfg.experiment, res.config_hash, res.wall_clock_seconds};
    if (cfg.experiment == "sample") {
      std::ofstream f(cfg.out, std::ios::binary | std::ios::trunc);
      if (!f) throw IoError("cannot open output file", cfg.out);
      f << draws;
      if (!f) throw IoError("write failed", cfg.out);
      res.written.push_back(cfg.out);
    } else {
      emit_report(res.table, format_from_string(cfg.format), cfg.out, meta);
      res.written.push_back(cfg.out);
      res.written.push_back(cfg.out + ".meta.json");
    }
  }
  return res;
}

std::vector<CoefficientDraw> read_draws(const std::string& text) {
  static const std::string magic = "# bfholes-draw";
  std::vector<CoefficientDraw> out;
  std::size_t pos = text.find(magic);
  while (pos != std::string::npos) {
    const std::size_t next = text.find(magic, pos + magic.size());
    std::istringstream block(text.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    out.push_back(read_draw(block));
    pos = next;
  }
  return out;
}

}  // namespace bfholes
