#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "bfholes/census.hpp"
#include "bfholes/sampling.hpp"

namespace bfholes {

enum class EventKind { real_hole, complex_hole, overcrowd, undercrowd };
const char* to_string(EventKind kind);
EventKind event_kind_from_string(const std::string& s);

struct EventSpec {
  EventKind kind = EventKind::real_hole;
  int m = 1;
  double r = 0.0;
  double delta = 0.0;
  /// Crowding center; NaN means r^2 / 2.
  double center = std::numeric_limits<double>::quiet_NaN();
  double grid_step = 0.0;  // real census grid, 0 = default
  double epsilon = 1e-9;   // truncation tolerance of the per-trial plan

  double crowd_center() const;
};

struct Sampler {
  enum class Kind { plain, tilted };
  Kind kind = Kind::plain;
  TiltSpec tilt;

  static Sampler plain() { return {}; }
  static Sampler tilted(TiltSpec t) { return {Kind::tilted, t}; }
  std::string describe() const;
};

struct RareEventEstimate {
  std::uint64_t trials = 0;
  double hits = 0.0;             // weighted, uncertain trials excluded
  double hits_optimistic = 0.0;  // weighted, uncertain trials included
  std::uint64_t uncertain = 0;
  double p_hat = 0.0;  // pessimistic
  double p_hat_optimistic = 0.0;
  double ci_low = 0.0;   // 95%, from the pessimistic estimate
  double ci_high = 0.0;  // 95%, from the optimistic estimate
  double standard_error = 0.0;
  double uncertain_fraction = 0.0;
  Sampler sampler;
  std::uint64_t seed_master = 0;
  std::uint64_t seed_trial_base = 0;
  int plan_degree = 0;
};

/// Wilson score interval for k successes in n trials.
std::pair<double, double> wilson_interval(double k, double n, double z = 1.959963984540054);

/// Trial i uses the coefficient stream (master_seed, trial_base + i). Trials run in
/// fixed-size chunks merged in chunk order, so the result does not depend on the number
/// of workers.
RareEventEstimate estimate_event_probability(const EventSpec& event, std::uint64_t trials, std::uint64_t master_seed,
                                             const Sampler& sampler = Sampler::plain(),
                                             std::uint64_t trial_base = 0);

/// Per-draw event verdict: 1 hit, 0 miss, -1 uncertain.
int event_outcome(const EventSpec& event, const CoefficientDraw& draw);

/// The plan used for each trial of an event (radius r sqrt(m) for real boxes, r for discs).
TruncationPlan event_plan(const EventSpec& event, const Sampler& sampler);

/// |count - center| >= delta r^2
bool crowding_indicator(int count, double r, double delta, double center);

enum class OmegaVariant { real, complex };
const char* to_string(OmegaVariant v);

struct OmegaSpec {
  OmegaVariant variant = OmegaVariant::real;
  int m = 1;
  double r = 0.0;
  /// real: alpha_j >= threshold for |j| <= band_cutoff. complex: |alpha_0| >= threshold.
  double threshold = 0.0;
  /// complex: |alpha_j| <= band_bound for 1 <= |j| <= band_cutoff. Unused for real.
  double band_bound = std::numeric_limits<double>::infinity();
  /// Beyond the cutoff every coefficient obeys |alpha_j| <= 2^{|j|/2}.
  int band_cutoff = 0;

  static OmegaSpec proof_default(OmegaVariant variant, int m, double r);
};

/// log P(Omega) as an exact sum of one-coordinate Gaussian log probabilities; the envelope
/// product is summed until the remainder is below 1e-12.
double omega_log_probability(const OmegaSpec& spec);

/// log P(alpha >= t) for a standard normal, accurate far into the tail.
double log_normal_sf(double t);

/// Every coordinate drawn exactly from its conditional law by inverse CDF.
CoefficientDraw omega_conditioned_draw(const NormalStream& stream, const OmegaSpec& spec, const TruncationPlan& plan);

/// Plan used by the verifier: radius 2 r sqrt(m) (real, box [0, 2r]^m) or r (complex).
TruncationPlan omega_plan(const OmegaSpec& spec, double epsilon = 1e-12);

bool in_omega(const OmegaSpec& spec, const CoefficientDraw& draw);

struct OmegaVerification {
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
  std::uint64_t uncertain = 0;
  int plan_degree = 0;
};

/// Real variant: no zero of psi on [0, 2r]^m (the translate of [-r, r]^m that the
/// positivity argument covers). Complex variant: no zero in the disc of radius r.
OmegaVerification verify_omega_implies_hole(const OmegaSpec& spec, std::uint64_t samples, std::uint64_t master_seed);

struct SumChainAudit {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double margin = 0.0;
  double e_m = 0.0;
  int split_degree = 0;
  double radius = 0.0;
  bool in_omega = true;
  bool sigma1_ok = true;  // complex: sigma1 <= 1/2
  bool sigma2_ok = true;  // sigma2 <= E_m
};

/// Both variants split at the band cutoff S. Real: sigma1 is the minimum over [0, R]^m of
/// the band sum (attained at 0 since the band is nonnegative), sigma2 = sum_{|j| > S}
/// |alpha_j| R^{|j|} / sqrt(j!) over the corner (R, .., R) plus the envelope tail, margin =
/// sigma1 - sigma2 - 1; R defaults to 2r. Complex: sigma1 = sum_{1 <= |j| <= S}, sigma2 the
/// rest, both with |z| = R (default r), margin = |alpha_0| - sigma1 - sigma2 - 1/2.
SumChainAudit sum_chain_audit(const CoefficientDraw& draw, const OmegaSpec& spec, double radius = 0.0);

}  // namespace bfholes
