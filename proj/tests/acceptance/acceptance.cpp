// Acceptance criteria. `bfholes_acceptance N...` runs the listed criteria (all when none
// are given) and prints one [PASS]/[FAIL] line per criterion; exit status 1 if any fail.
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "bfholes/census.hpp"
#include "bfholes/comparison.hpp"
#include "bfholes/experiment.hpp"
#include "bfholes/field.hpp"
#include "bfholes/multiindex.hpp"
#include "bfholes/parallel.hpp"
#include "bfholes/rare_events.hpp"
#include "bfholes/report.hpp"
#include "bfholes/sampling.hpp"

using namespace bfholes;

namespace {

constexpr double kZ99 = 2.5758293035489004;

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> details;

  void check(bool ok, const std::string& line) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + line);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

TruncationPlan plain_plan(int m, double radius) {
  PlanOptions o;
  o.omega_floor = false;
  return truncation_plan(m, radius, 1e-9, o);
}

// Per-draw statistic summed over trials [0, n) in chunk order.
template <class F>
std::vector<double> per_draw(std::uint64_t n, F&& f) {
  std::vector<double> out(n);
  const std::size_t chunks = (n + kTrialChunk - 1) / kTrialChunk;
  parallel_for_chunks(chunks, [&](std::size_t c) {
    const std::uint64_t end = std::min<std::uint64_t>(n, (c + 1) * kTrialChunk);
    for (std::uint64_t i = c * kTrialChunk; i < end; ++i) out[i] = f(i);
  });
  return out;
}

struct Ci {
  double p, lo, hi;
};

Ci ci99(const RareEventEstimate& e) {
  if (e.sampler.kind == Sampler::Kind::plain) {
    const auto w = wilson_interval(e.hits, static_cast<double>(e.trials), kZ99);
    const auto wo = wilson_interval(e.hits_optimistic, static_cast<double>(e.trials), kZ99);
    return {e.p_hat, w.first, wo.second};
  }
  return {e.p_hat, std::max(0.0, e.p_hat - kZ99 * e.standard_error),
          e.p_hat_optimistic + kZ99 * e.standard_error};
}

Sampler real_tilt(double r) {
  TiltSpec t;
  t.kind = TiltKind::real_hole;
  t.m = 1;
  t.r = r;
  t.shift_alpha0 = 0.5;
  t.band_cutoff = 4;
  t.band_scale = 0.9;
  t.symmetric_alpha0 = true;
  return Sampler::tilted(t);
}

Sampler complex_tilt(double r) {
  TiltSpec t;
  t.kind = TiltKind::complex_hole;
  t.m = 1;
  t.r = r;
  t.shift_alpha0 = std::round(3.2 * r) / 2.0;
  t.band_cutoff = 16;
  t.band_scale = 1.0;
  t.symmetric_alpha0 = true;
  t.envelope_profile = true;
  return Sampler::tilted(t);
}

EventSpec hole(EventKind kind, double r) {
  EventSpec e;
  e.kind = kind;
  e.m = 1;
  e.r = r;
  return e;
}

// n consecutive points of spacing 2 on the line.
Eigen::MatrixXd chain_covariance(int n) {
  std::vector<std::vector<double>> pts;
  for (int k = 0; k < n; ++k) pts.push_back({2.0 * k});
  return gaussian_covariance(pts);
}

Outcome orthant_sandwich() {
  Outcome o;
  for (int n = 1; n <= 12; ++n) {
    const auto cov = chain_covariance(n);
    const auto ls = li_shao_bounds(cov);
    const auto est = orthant_probability_oracle(cov, 1'000'000, 101, kZ99);
    const double lower = std::exp(ls.lower), upper = std::exp(ls.upper);
    const double tol = 1e-12 * lower;
    o.check(est.ci_high >= lower - tol && est.ci_low <= upper + tol,
            fmt("n=%2d p=%.6e ci99=[%.6e, %.6e] bracket=[%.6e, %.6e]%s", n, est.p, est.ci_low, est.ci_high, lower,
                upper, est.exact ? " exact" : ""));
  }
  const auto pair = orthant_probability_oracle(chain_covariance(2), 0, 101);
  const double target = 0.25 + std::asin(std::exp(-4.0)) / (2.0 * std::numbers::pi);
  const double spacing_two = bivariate_orthant(std::exp(-2.0));
  o.check(std::abs(pair.p - target) <= 1e-12,
          fmt("n=2 exact %.12f vs 1/4 + arcsin(e^-4)/(2 pi) = %.12f (1/4 + arcsin(e^-2)/(2 pi) = %.12f)", pair.p,
              target, spacing_two));
  o.summary = "orthant probabilities inside the comparison bracket, exact pair value";
  return o;
}

Outcome gaussian_tail_claim() {
  Outcome o;
  std::string failing;
  for (int k = 14; k <= 100; ++k) {
    const double lambda = k / 10.0;
    const auto [ai, aii] = gaussian_tail_audit(lambda);
    if (ai.verdict != Verdict::holds) failing += fmt(" %.1f(margin %.3g)", lambda, ai.margin);
  }
  o.check(failing.empty(), "a-i holds for lambda in [1.4, 10]" + (failing.empty() ? "" : "; violated at" + failing));
  const auto [ai1, aii1] = gaussian_tail_audit(1.0);
  o.check(ai1.verdict == Verdict::violated && std::abs(ai1.reference_value - 0.317311) < 5e-7 &&
              std::abs(ai1.claimed_upper - 0.241971) < 5e-7,
          fmt("lambda=1: P(|a|>=1)=%.6f > claimed %.6f", ai1.reference_value, ai1.claimed_upper));
  o.summary = "claimed Gaussian tail bound";
  return o;
}

Outcome real_zero_density() {
  Outcome o;
  const double r = 5.0;
  const auto plan = plain_plan(1, r);
  std::atomic<int> uncertain{0};
  const auto counts = per_draw(100'000, [&](std::uint64_t i) {
    const auto d = draw_coefficients(NormalStream({103, i, StreamRole::coefficients}), plan);
    const auto c = real_zero_count(d, BoxSpec::interval(r));
    if (c.count_is_lower_bound) ++uncertain;
    return static_cast<double>(c.count);
  });
  double mean = 0.0;
  for (double c : counts) mean += c;
  mean /= static_cast<double>(counts.size());
  const double target = 2.0 * r / std::numbers::pi;
  o.check(std::abs(mean - target) <= 0.03,
          fmt("mean count on [-5, 5] = %.5f, 10/pi = %.5f, |diff| = %.5f <= 0.03 (uncertain draws %d)", mean,
              target, std::abs(mean - target), uncertain.load()));

  // Small-r cross-check against a brute-force sign scan of the same draws.
  const double r0 = 1.0;
  const auto plan0 = plain_plan(1, r0);
  std::atomic<int> disagree{0};
  const auto brute = per_draw(20'000, [&](std::uint64_t i) {
    const auto d = draw_coefficients(NormalStream({104, i, StreamRole::coefficients}), plan0);
    const int census = real_zero_count(d, BoxSpec::interval(r0)).count;
    int changes = 0;
    double prev = 0.0;
    for (int k = 0; k <= 2000; ++k) {
      const double x = -r0 + 2.0 * r0 * k / 2000.0;
      const double v = evaluate_real(d, std::span<const double>(&x, 1));
      if (k > 0 && (v > 0) != (prev > 0)) ++changes;
      prev = v;
    }
    if (changes != census) ++disagree;
    return static_cast<double>(changes);
  });
  double bmean = 0.0;
  for (double c : brute) bmean += c;
  bmean /= static_cast<double>(brute.size());
  o.check(disagree.load() <= 20 && std::abs(bmean - 2.0 / std::numbers::pi) < 0.03,
          fmt("r=1: sign-scan mean %.4f vs 2/pi %.4f, census disagreements %d / 20000", bmean, 2.0 / std::numbers::pi,
              disagree.load()));
  o.summary = "Kac-Rice density of real zeros";
  return o;
}

Outcome growth() {
  Outcome o;
  const double r = 5.0;
  const auto plan = plain_plan(1, r);
  std::vector<double> mx(200), av(200);
  per_draw(200, [&](std::uint64_t i) {
    const auto d = draw_coefficients(NormalStream({105, i, StreamRole::coefficients}), plan);
    mx[i] = max_log_modulus(d, r).value;
    av[i] = sphere_average_log(d, r).value;
    return 0.0;
  });
  double smx = 0.0, sav = 0.0;
  for (std::size_t i = 0; i < 200; ++i) smx += mx[i], sav += av[i];
  const double a = smx / 200.0 / (r * r), b = sav / 200.0 / (r * r);
  o.check(a >= 0.4 && a <= 0.6, fmt("mean max log|psi| / r^2 = %.4f in [0.4, 0.6]", a));
  o.check(b >= 0.4 && b <= 0.6, fmt("mean circle average log|psi| / r^2 = %.4f in [0.4, 0.6]", b));
  o.summary = "growth of log|psi| at r = 5";
  return o;
}

Outcome jensen() {
  Outcome o;
  const double r = 3.0;
  const auto plan = plain_plan(1, r);
  double worst = 0.0;
  const auto ok = per_draw(1000, [&](std::uint64_t i) {
    const auto d = draw_coefficients(NormalStream({106, i, StreamRole::coefficients}), plan);
    return std::abs(jensen_audit(d, r).residual);
  });
  int good = 0;
  for (double res : ok) {
    good += res <= 1e-3;
    worst = std::max(worst, res);
  }
  o.check(good >= 990, fmt("%d / 1000 draws with |residual| <= 1e-3 (need >= 990), worst %.3g", good, worst));
  o.summary = "Jensen formula at r = 3";
  return o;
}

Outcome omega_verifiers() {
  Outcome o;
  const auto real = verify_omega_implies_hole(OmegaSpec::proof_default(OmegaVariant::real, 1, 2.0), 10'000, 107);
  o.check(real.violations == 0 && real.uncertain == 0 && real.samples == 10'000,
          fmt("real m=1 r=2: %llu samples, %llu violations, %llu uncertain (degree %d)",
              static_cast<unsigned long long>(real.samples), static_cast<unsigned long long>(real.violations),
              static_cast<unsigned long long>(real.uncertain), real.plan_degree));
  const auto cplx = verify_omega_implies_hole(OmegaSpec::proof_default(OmegaVariant::complex, 1, 2.0), 1'000, 108);
  o.check(cplx.violations == 0 && cplx.uncertain == 0 && cplx.samples == 1'000,
          fmt("complex m=1 r=2: %llu samples, %llu violations, %llu uncertain (degree %d)",
              static_cast<unsigned long long>(cplx.samples), static_cast<unsigned long long>(cplx.violations),
              static_cast<unsigned long long>(cplx.uncertain), cplx.plan_degree));
  o.summary = "conditioned draws in the proof events are holes";
  return o;
}

Outcome sandwich() {
  Outcome o;
  for (double r : {2.0, 3.0, 4.0}) {
    const bool tilted = r == 4.0;
    const auto est = tilted ? estimate_event_probability(hole(EventKind::real_hole, r), 200'000, 109, real_tilt(r))
                            : estimate_event_probability(hole(EventKind::real_hole, r), 1'000'000, 109);
    const Ci c = ci99(est);
    const double log_lower = omega_log_probability(OmegaSpec::proof_default(OmegaVariant::real, 1, r));
    const auto ls = li_shao_bounds(build_lattice(1, r));
    const double upper = 2.0 * std::exp(ls.upper);
    o.check(std::log(c.hi) >= log_lower && c.lo <= upper,
            fmt("r=%.0f %s p=%.5f ci99=[%.5f, %.5f] lower=exp(%.1f) upper=%.5f (|J|=%zu)", r,
                tilted ? "tilted" : "plain", c.p, c.lo, c.hi, log_lower, upper, ls.n));
  }
  o.summary = "hole probability between the proof-event and comparison bounds";
  return o;
}

ExponentFit ladder_fit(EventKind kind, const std::vector<double>& radii, const std::vector<std::uint64_t>& trials,
                       std::vector<std::string>& log) {
  std::vector<FitPoint> pts;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    const Sampler s = kind == EventKind::real_hole ? real_tilt(r) : complex_tilt(r);
    const auto e = estimate_event_probability(hole(kind, r), trials[i], 110, s);
    pts.push_back({r, e.p_hat, e.ci_low, e.ci_high, e.trials});
    log.push_back(fmt("  %s r=%.2f %s p=%.4e ci=[%.4e, %.4e]", to_string(kind), r, s.describe().c_str(), e.p_hat,
                      e.ci_low, e.ci_high));
  }
  return fit_decay_exponent(pts);
}

Outcome exponents() {
  Outcome o;
  const std::vector<double> grid{1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0};
  for (double k : {1.0, 2.0, 4.0}) {
    std::vector<FitPoint> pts;
    for (double r : grid) {
      const double p = std::exp(-0.05 * std::pow(r, k));
      pts.push_back({r, p, 0.95 * p, 1.05 * p, 1'000'000});
    }
    const auto f = fit_decay_exponent(pts);
    o.check(std::abs(f.slope - k) <= 0.01 * k, fmt("planted exponent %.0f recovered as %.6f", k, f.slope));
  }
  std::vector<std::string> log;
  const auto real = ladder_fit(EventKind::real_hole, {1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0},
                              std::vector<std::uint64_t>(8, 40'000), log);
  const auto cplx = ladder_fit(EventKind::complex_hole, {1.5, 1.75, 2.0, 2.25, 2.5},
                              {100'000, 100'000, 100'000, 200'000, 1'000'000}, log);
  for (auto& l : log) o.details.push_back(l);
  o.check(real.slope >= 0.7 && real.slope <= 2.3 && real.rejected_radii.empty(),
          fmt("real hole slope %.3f (ci [%.3f, %.3f], %zu points) in [0.7, 2.3]", real.slope, real.slope_ci.first,
              real.slope_ci.second, real.radii.size()));
  o.check(cplx.rejected_radii.empty() && cplx.slope - real.slope >= 1.0,
          fmt("complex hole slope %.3f (ci [%.3f, %.3f], %zu points) exceeds the real slope by %.3f >= 1", cplx.slope,
              cplx.slope_ci.first, cplx.slope_ci.second, cplx.radii.size(), cplx.slope - real.slope));
  o.summary = "decay exponents";
  return o;
}

Outcome importance_sampling() {
  Outcome o;
  const double r = 1.5;
  for (EventKind kind : {EventKind::real_hole, EventKind::complex_hole}) {
    int overlaps = 0;
    std::string misses;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto plain = ci99(estimate_event_probability(hole(kind, r), 20'000, 200 + seed));
      const Sampler s = kind == EventKind::real_hole ? real_tilt(r) : complex_tilt(r);
      const auto tilt = ci99(estimate_event_probability(hole(kind, r), 20'000, 200 + seed, s, 1'000'000));
      if (plain.lo <= tilt.hi && tilt.lo <= plain.hi)
        ++overlaps;
      else
        misses += fmt(" seed %llu: plain [%.4g, %.4g] tilted [%.4g, %.4g];", static_cast<unsigned long long>(seed),
                      plain.lo, plain.hi, tilt.lo, tilt.hi);
    }
    o.check(overlaps == 20, fmt("%s r=1.5: %d / 20 replicate pairs of 99%% intervals overlap%s", to_string(kind),
                                overlaps, misses.c_str()));
  }
  o.summary = "tilted and plain estimators agree";
  return o;
}

std::string run_bytes(ExperimentConfig cfg, int workers, const std::filesystem::path& dir) {
  setenv("BFHOLES_THREADS", std::to_string(workers).c_str(), 1);
  cfg.out = (dir / (cfg.experiment + "_" + std::to_string(workers) + ".csv")).string();
  run_experiment(cfg);
  std::ifstream f(cfg.out, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / ("bfholes_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  std::vector<ExperimentConfig> cfgs;
  {
    ExperimentConfig c;
    c.experiment = "hole_ladder";
    c.kind = "real_hole";
    c.r_values = {1.0, 1.5, 2.0};
    c.trials = 3000;
    c.master_seed = 11;
    c.sampler = "tilted";
    c.shift_alpha0 = {1.0};
    c.band_scale = {0.9};
    c.band_cutoff = {4};
    cfgs.push_back(c);
    c.sampler = "plain";
    cfgs.push_back(c);
    c.kind = "complex_hole";
    c.sampler = "tilted";
    c.shift_alpha0 = {2.0};
    c.band_scale = {1.0};
    c.band_cutoff = {16};
    c.band_profile = "envelope";
    cfgs.push_back(c);
  }
  {
    ExperimentConfig c;
    c.experiment = "crowding_ladder";
    c.r_values = {1.0, 2.0};
    c.trials = 2000;
    cfgs.push_back(c);
    c.experiment = "growth_stats";
    c.trials = 300;
    cfgs.push_back(c);
    c.experiment = "sample";
    c.r_values = {2.0};
    c.trials = 600;
    cfgs.push_back(c);
  }
  const char* saved = std::getenv("BFHOLES_THREADS");
  const std::string restore = saved ? saved : "";
  for (const auto& c : cfgs) {
    const std::string one = run_bytes(c, 1, dir);
    const std::string three = run_bytes(c, 3, dir);
    const std::string eight = run_bytes(c, 8, dir);
    o.check(!one.empty() && one == three && one == eight,
            fmt("%s %s (%s): %zu bytes identical for 1, 3 and 8 workers", c.experiment.c_str(), c.kind.c_str(),
                c.sampler.c_str(), one.size()));
  }
  if (saved)
    setenv("BFHOLES_THREADS", restore.c_str(), 1);
  else
    unsetenv("BFHOLES_THREADS");
  std::filesystem::remove_all(dir);
  o.summary = "output bytes independent of the worker count";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::function<Outcome()>> criteria = {
      {1, orthant_sandwich}, {2, gaussian_tail_claim}, {3, real_zero_density}, {4, growth},
      {5, jensen},           {6, omega_verifiers},     {7, sandwich},          {8, exponents},
      {9, importance_sampling}, {10, determinism}};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (const auto& [k, f] : criteria) selected.push_back(k);

  bool all = true;
  for (int k : selected) {
    const auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 2;
    }
    Outcome o;
    try {
      o = it->second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("threw: ") + e.what();
    }
    for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
    std::printf("[%s] criterion %d: %s\n", o.pass ? "PASS" : "FAIL", k, o.summary.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
