#include "bfholes/rare_events.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "bfholes/errors.hpp"
#include "bfholes/field.hpp"
#include "bfholes/parallel.hpp"

namespace bfholes {

namespace {

constexpr double kZ95 = 1.959963984540054;
constexpr std::uint64_t kSignIndex = NormalStream::kMaxIndex;

struct TrialTally {
  double hits = 0.0;
  double hits_sq = 0.0;
  double opt = 0.0;
  double opt_sq = 0.0;
  std::uint64_t uncertain = 0;
};

// alpha >= t, exactly by inverse CDF
double sample_above(double u, double t) {
  return std::numbers::sqrt2 * boost::math::erfc_inv(u * std::erfc(t / std::numbers::sqrt2));
}

// |alpha| <= b, exactly by inverse CDF; v in (-1, 1)
double sample_band(double v, double b) {
  if (std::isinf(b)) return std::numbers::sqrt2 * boost::math::erf_inv(v);
  return std::numbers::sqrt2 * boost::math::erf_inv(v * std::erf(b / std::numbers::sqrt2));
}

double envelope(int degree) { return std::exp(0.5 * degree * std::numbers::ln2); }

}  // namespace

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::real_hole: return "real_hole";
    case EventKind::complex_hole: return "complex_hole";
    case EventKind::overcrowd: return "overcrowd";
    case EventKind::undercrowd: return "undercrowd";
  }
  return "unknown";
}

EventKind event_kind_from_string(const std::string& s) {
  if (s == "real_hole") return EventKind::real_hole;
  if (s == "complex_hole") return EventKind::complex_hole;
  if (s == "overcrowd") return EventKind::overcrowd;
  if (s == "undercrowd") return EventKind::undercrowd;
  throw InvalidArgument("unknown event kind '" + s + "'");
}

double EventSpec::crowd_center() const { return std::isnan(center) ? 0.5 * r * r : center; }

std::string Sampler::describe() const {
  if (kind == Kind::plain) return "plain";
  return std::string("tilted(") + to_string(tilt.kind) + ";shift=" + std::to_string(tilt.shift_alpha0) +
         ";scale=" + std::to_string(tilt.band_scale) + ";cutoff=" + std::to_string(tilt.band_cutoff) +
         (tilt.symmetric_alpha0 ? ";symmetric" : "") + (tilt.envelope_profile ? ";envelope" : "") + ")";
}

std::pair<double, double> wilson_interval(double k, double n, double z) {
  if (!(n > 0.0)) throw InvalidArgument("Wilson interval needs n > 0");
  const double p = k / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(std::max(0.0, p * (1.0 - p) / n + z2 / (4.0 * n * n))) / denom;
  return {k <= 0.0 ? 0.0 : std::max(0.0, centre - half), k >= n ? 1.0 : std::min(1.0, centre + half)};
}

bool crowding_indicator(int count, double r, double delta, double center) {
  return std::abs(count - center) >= delta * r * r;
}

TruncationPlan event_plan(const EventSpec& event, const Sampler& sampler) {
  if (event.m < 1) throw InvalidArgument("dimension m must be >= 1");
  if (!(event.r >= 0.0)) throw InvalidArgument("radius must be nonnegative");
  double radius = event.kind == EventKind::real_hole ? event.r * std::sqrt(static_cast<double>(event.m)) : event.r;
  radius = std::max(radius, 0.1);
  PlanOptions opts;
  opts.omega_floor = false;
  if (sampler.kind == Sampler::Kind::tilted) opts.min_degree = sampler.tilt.band_cutoff;
  return truncation_plan(event.m, radius, event.epsilon, opts);
}

int event_outcome(const EventSpec& event, const CoefficientDraw& draw) {
  if (event.kind == EventKind::real_hole) {
    BoxSpec box{event.m, event.r, event.grid_step, {}};
    switch (real_hole_indicator(draw, box)) {
      case CensusVerdict::hole: return 1;
      case CensusVerdict::zero_found: return 0;
      case CensusVerdict::uncertain: return -1;
    }
  }
  if (event.m != 1) throw InvalidArgument("complex holes and crowding need m = 1");
  int n = 0;
  if (event.r > 0.0) {
    try {
      n = winding_count(draw, event.r);
    } catch (const CensusFailure&) {
      return -1;
    }
  }
  const double c = event.crowd_center();
  const double margin = event.delta * event.r * event.r;
  switch (event.kind) {
    case EventKind::complex_hole: return n == 0 ? 1 : 0;
    case EventKind::overcrowd: return n - c >= margin ? 1 : 0;
    case EventKind::undercrowd: return c - n >= margin ? 1 : 0;
    default: break;
  }
  return 0;
}

RareEventEstimate estimate_event_probability(const EventSpec& event, std::uint64_t trials, std::uint64_t master_seed,
                                             const Sampler& sampler, std::uint64_t trial_base) {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  if ((event.kind == EventKind::overcrowd || event.kind == EventKind::undercrowd) && event.delta < 0.0) {
    throw InvalidArgument("crowding margin delta must be nonnegative");
  }
  if (event.kind != EventKind::real_hole && event.m != 1) throw InvalidArgument("complex holes and crowding need m = 1");
  const bool tilted = sampler.kind == Sampler::Kind::tilted;
  if (tilted) {
    const bool match = (event.kind == EventKind::real_hole && sampler.tilt.kind == TiltKind::real_hole) ||
                       (event.kind == EventKind::complex_hole && sampler.tilt.kind == TiltKind::complex_hole);
    if (!match) throw InvalidArgument(std::string("tilt kind does not match event kind ") + to_string(event.kind));
    if (sampler.tilt.m != event.m) throw InvalidArgument("tilt dimension does not match the event");
  }
  const TruncationPlan plan = event_plan(event, sampler);

  const std::size_t chunks = static_cast<std::size_t>((trials + kTrialChunk - 1) / kTrialChunk);
  std::vector<TrialTally> tally(chunks);
  parallel_for_chunks(chunks, [&](std::size_t c) {
    TrialTally t;
    const std::uint64_t first = static_cast<std::uint64_t>(c) * kTrialChunk;
    const std::uint64_t last = std::min<std::uint64_t>(trials, first + kTrialChunk);
    for (std::uint64_t i = first; i < last; ++i) {
      const NormalStream stream({master_seed, trial_base + i, StreamRole::coefficients});
      const CoefficientDraw draw = tilted ? tilted_draw(stream, plan, sampler.tilt) : draw_coefficients(stream, plan);
      const int out = event_outcome(event, draw);
      const double w = tilted ? std::exp(draw.log_weight) : 1.0;
      if (out == 1) {
        t.hits += w;
        t.hits_sq += w * w;
      }
      if (out != 0) {
        t.opt += w;
        t.opt_sq += w * w;
      }
      if (out == -1) ++t.uncertain;
    }
    tally[c] = t;
  });

  TrialTally total;
  for (const auto& t : tally) {
    total.hits += t.hits;
    total.hits_sq += t.hits_sq;
    total.opt += t.opt;
    total.opt_sq += t.opt_sq;
    total.uncertain += t.uncertain;
  }

  RareEventEstimate e;
  e.trials = trials;
  e.hits = total.hits;
  e.hits_optimistic = total.opt;
  e.uncertain = total.uncertain;
  e.sampler = sampler;
  e.seed_master = master_seed;
  e.seed_trial_base = trial_base;
  e.plan_degree = plan.degree;
  const double n = static_cast<double>(trials);
  e.uncertain_fraction = static_cast<double>(total.uncertain) / n;
  e.p_hat = std::clamp(total.hits / n, 0.0, 1.0);
  e.p_hat_optimistic = std::clamp(total.opt / n, 0.0, 1.0);
  if (!tilted) {
    e.ci_low = std::min(e.p_hat, wilson_interval(total.hits, n).first);
    e.ci_high = std::max(e.p_hat_optimistic, wilson_interval(total.opt, n).second);
    e.standard_error = std::sqrt(e.p_hat * (1.0 - e.p_hat) / n);
  } else {
    auto se = [n](double s, double s2) {
      if (n < 2.0) return 0.0;
      const double mean = s / n;
      return std::sqrt(std::max(0.0, (s2 / n - mean * mean) * n / (n - 1.0)) / n);
    };
    const double se_p = se(total.hits, total.hits_sq);
    const double se_o = se(total.opt, total.opt_sq);
    e.standard_error = se_p;
    e.ci_low = std::clamp(total.hits / n - kZ95 * se_p, 0.0, e.p_hat);
    e.ci_high = std::clamp(total.opt / n + kZ95 * se_o, e.p_hat_optimistic, 1.0);
  }
  return e;
}

const char* to_string(OmegaVariant v) { return v == OmegaVariant::real ? "real" : "complex"; }

OmegaSpec OmegaSpec::proof_default(OmegaVariant variant, int m, double r) {
  if (m < 1) throw InvalidArgument("dimension m must be >= 1");
  if (!(r >= 0.0)) throw InvalidArgument("radius must be nonnegative");
  OmegaSpec s;
  s.variant = variant;
  s.m = m;
  s.r = r;
  s.threshold = e_m_constant(m) + 1.0;
  if (variant == OmegaVariant::real) {
    s.band_cutoff = omega_real_cutoff(m, r);
  } else {
    s.band_cutoff = omega_complex_cutoff(m, r);
    s.band_bound = std::exp(-(1.0 + 0.5 * m) * r * r);
  }
  return s;
}

double log_normal_sf(double t) {
  if (t < 30.0) return std::log(0.5 * std::erfc(t / std::numbers::sqrt2));
  const double t2 = t * t;
  const double series = 1.0 - 1.0 / t2 + 3.0 / (t2 * t2) - 15.0 / (t2 * t2 * t2);
  return -0.5 * t2 - std::log(t * std::sqrt(2.0 * std::numbers::pi)) + std::log(series);
}

double omega_log_probability(const OmegaSpec& spec) {
  if (spec.m < 1) throw InvalidArgument("dimension m must be >= 1");
  if (spec.band_cutoff < 0) throw InvalidArgument("band cutoff must be nonnegative");
  const double band_count = static_cast<double>(count_up_to_degree(spec.m, spec.band_cutoff));
  double lp = 0.0;
  if (spec.variant == OmegaVariant::real) {
    lp += band_count * log_normal_sf(spec.threshold);
  } else {
    if (spec.threshold > 0.0) lp += std::numbers::ln2 + log_normal_sf(spec.threshold);
    if (!std::isinf(spec.band_bound)) {
      if (!(spec.band_bound > 0.0)) return -std::numeric_limits<double>::infinity();
      lp += (band_count - 1.0) * std::log(std::erf(spec.band_bound / std::numbers::sqrt2));
    }
  }
  // Envelope factors: each term is count * log(1 - P(|alpha| > 2^{n/2})); the tail
  // probabilities fall off like exp(-2^n / 2), so stopping at 1e-16 leaves far less than 1e-12.
  for (int n = spec.band_cutoff + 1;; ++n) {
    const double p_out = std::erfc(envelope(n) / std::numbers::sqrt2);
    const double term = count_at_degree(spec.m, n) * std::log1p(-p_out);
    lp += term;
    if (std::abs(term) < 1e-16) break;
  }
  return lp;
}

TruncationPlan omega_plan(const OmegaSpec& spec, double epsilon) {
  const double sm = std::sqrt(static_cast<double>(spec.m));
  double radius = spec.variant == OmegaVariant::real ? 2.0 * spec.r * sm : spec.r;
  radius = std::max(radius, 0.1);
  PlanOptions opts;
  opts.omega_floor = false;
  opts.min_degree = spec.band_cutoff;
  return truncation_plan(spec.m, radius, epsilon, opts);
}

CoefficientDraw omega_conditioned_draw(const NormalStream& stream, const OmegaSpec& spec, const TruncationPlan& plan) {
  if (plan.m != spec.m) throw InvalidArgument("plan dimension does not match the spec");
  if (plan.degree < spec.band_cutoff) throw InvalidArgument("plan degree is below the band cutoff");
  CoefficientDraw d;
  d.plan = plan;
  d.indices = index_table(plan.m, plan.degree);
  d.stream = stream.spec();
  const auto& idx = *d.indices;
  d.values.resize(idx.size());
  const std::size_t band_end = idx.degree_begin(spec.band_cutoff + 1);
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const double u = stream.uniform(p);
    if (p >= band_end) {
      d.values[p] = sample_band(2.0 * u - 1.0, envelope(idx.degree(p)));
    } else if (spec.variant == OmegaVariant::real) {
      d.values[p] = sample_above(u, spec.threshold);
    } else if (p == 0) {
      if (spec.threshold > 0.0) {
        const double a = sample_above(u, spec.threshold);
        d.values[p] = stream.uniform(kSignIndex) < 0.5 ? -a : a;
      } else {
        d.values[p] = normal_quantile(u);
      }
    } else {
      d.values[p] = sample_band(2.0 * u - 1.0, spec.band_bound);
    }
  }
  return d;
}

bool in_omega(const OmegaSpec& spec, const CoefficientDraw& draw) {
  const auto& idx = *draw.indices;
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const int d = idx.degree(p);
    const double a = draw.values[p];
    if (d > spec.band_cutoff) {
      if (std::abs(a) > envelope(d)) return false;
    } else if (spec.variant == OmegaVariant::real) {
      if (a < spec.threshold) return false;
    } else if (d == 0) {
      if (std::abs(a) < spec.threshold) return false;
    } else if (std::abs(a) > spec.band_bound) {
      return false;
    }
  }
  return draw.degree() >= spec.band_cutoff;
}

OmegaVerification verify_omega_implies_hole(const OmegaSpec& spec, std::uint64_t samples, std::uint64_t master_seed) {
  if (samples < 1) throw InvalidArgument("samples must be >= 1");
  OmegaVerification v;
  v.samples = samples;
  if (spec.r == 0.0) return v;
  if (spec.variant == OmegaVariant::complex && spec.m != 1) throw InvalidArgument("complex verifier needs m = 1");
  const TruncationPlan plan = omega_plan(spec);
  v.plan_degree = plan.degree;

  struct Count {
    std::uint64_t violations = 0;
    std::uint64_t uncertain = 0;
  };
  const std::size_t chunks = static_cast<std::size_t>((samples + kTrialChunk - 1) / kTrialChunk);
  std::vector<Count> counts(chunks);
  parallel_for_chunks(chunks, [&](std::size_t c) {
    Count k;
    const std::uint64_t first = static_cast<std::uint64_t>(c) * kTrialChunk;
    const std::uint64_t last = std::min<std::uint64_t>(samples, first + kTrialChunk);
    for (std::uint64_t i = first; i < last; ++i) {
      const NormalStream stream({master_seed, i, StreamRole::coefficients});
      const CoefficientDraw d = omega_conditioned_draw(stream, spec, plan);
      if (spec.variant == OmegaVariant::real) {
        BoxSpec box{spec.m, spec.r, 0.0, std::vector<double>(static_cast<std::size_t>(spec.m), spec.r)};
        const CensusVerdict verdict = real_hole_indicator(d, box);
        if (verdict == CensusVerdict::zero_found) ++k.violations;
        if (verdict == CensusVerdict::uncertain) ++k.uncertain;
      } else {
        try {
          if (winding_count(d, spec.r) != 0) ++k.violations;
        } catch (const CensusFailure&) {
          ++k.uncertain;
        }
      }
    }
    counts[c] = k;
  });
  for (const auto& k : counts) {
    v.violations += k.violations;
    v.uncertain += k.uncertain;
  }
  return v;
}

SumChainAudit sum_chain_audit(const CoefficientDraw& draw, const OmegaSpec& spec, double radius) {
  if (draw.m() != spec.m) throw InvalidArgument("draw dimension does not match the spec");
  SumChainAudit a;
  const bool real = spec.variant == OmegaVariant::real;
  a.radius = radius > 0.0 ? radius : (real ? 2.0 * spec.r : spec.r);
  a.split_degree = spec.band_cutoff;
  a.e_m = e_m_constant(spec.m);
  a.in_omega = in_omega(spec, draw);

  const auto& idx = *draw.indices;
  const double lr = a.radius > 0.0 ? std::log(a.radius) : -std::numeric_limits<double>::infinity();
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const int d = idx.degree(p);
    const double av = std::abs(draw.values[p]);
    if (d == 0 || av == 0.0) continue;
    const double term = av * std::exp(d * lr - 0.5 * idx.log_factorial(p));
    if (d > a.split_degree) {
      s2 += term;
    } else if (!real) {
      s1 += term;
    }
  }
  // Discarded coefficients obey the envelope; bound them on the ball through the corner.
  const double ball = real ? a.radius * std::sqrt(static_cast<double>(spec.m)) : a.radius;
  if (ball > 0.0) s2 += envelope_tail_bound(spec.m, ball, draw.degree(), 0);
  a.sigma2 = s2;
  if (real) {
    a.sigma1 = draw.values[0];
    a.margin = a.sigma1 - a.sigma2 - 1.0;
  } else {
    a.sigma1 = s1;
    a.margin = std::abs(draw.values[0]) - a.sigma1 - a.sigma2 - 0.5;
    a.sigma1_ok = a.sigma1 <= 0.5;
  }
  a.sigma2_ok = a.sigma2 <= a.e_m;
  return a;
}

}  // namespace bfholes
