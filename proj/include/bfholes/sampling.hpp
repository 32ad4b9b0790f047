#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "bfholes/multiindex.hpp"
#include "bfholes/rng.hpp"

namespace bfholes {

/// Degree cutoff ceil(48 m r^2) used by the real-hole proof event.
int omega_real_cutoff(int m, double r);
/// Degree cutoff ceil(24 m r^2) used by the complex-hole proof event.
int omega_complex_cutoff(int m, double r);

/// Where a truncated series is trusted. The tail bounds hold on the complex ball of
/// `radius` under the coefficient envelope |alpha_j| <= 2^{|j|/2} for |j| > degree.
struct TruncationPlan {
  int m = 1;
  double radius = 0.0;
  int degree = 0;
  double tail_bound = 0.0;     // sup |psi - psi_N|
  double tail_bound_d1 = 0.0;  // sup of any first partial derivative of the tail
  double tail_bound_d2 = 0.0;  // sup of any second partial derivative of the tail
  double envelope_confidence = 1.0;

  std::size_t coefficient_count() const { return count_up_to_degree(m, degree); }
};

struct PlanOptions {
  /// Enforce degree >= ceil(48 m radius^2). Needed whenever the plan backs proof-event draws.
  bool omega_floor = true;
  int min_degree = 0;
  std::size_t max_coefficients = 10'000'000;
};

/// Certified bound on sup_{|z| <= radius} of the discarded terms |j| > degree (derivative
/// order 0, 1 or 2), assuming the envelope. Sums the degree shells in log space and closes
/// with a geometric remainder once the shell ratio drops below 1/2.
double envelope_tail_bound(int m, double radius, int degree, int derivative_order = 0);

/// Probability that every coefficient with |j| > degree obeys |alpha_j| <= 2^{|j|/2}.
double envelope_confidence(int m, int degree);

/// Smallest admissible degree whose certified tail bound is <= epsilon.
TruncationPlan truncation_plan(int m, double radius, double epsilon, PlanOptions options = {});

struct CoefficientDraw {
  TruncationPlan plan;
  std::vector<double> values;  // canonical order
  double log_weight = 0.0;     // log(target density / proposal density); 0 for plain draws
  RngStreamSpec stream;
  std::shared_ptr<const IndexTable> indices;

  int m() const noexcept { return plan.m; }
  int degree() const noexcept { return plan.degree; }
};

/// Wraps explicit coefficients (padded with zeros to the plan's length).
CoefficientDraw make_draw(const TruncationPlan& plan, std::vector<double> values);

/// i.i.d. standard normals read from positions 0.. of the stream. Because the enumeration
/// is graded, a higher-degree draw from the same stream extends a lower-degree one.
CoefficientDraw draw_coefficients(const NormalStream& stream, const TruncationPlan& plan);

enum class TiltKind { real_hole, complex_hole };
const char* to_string(TiltKind kind);

struct TiltSpec {
  TiltKind kind = TiltKind::real_hole;
  double r = 0.0;
  int m = 1;
  double shift_alpha0 = 0.0;
  /// Standard deviation of the band coefficients 1 <= |j| <= band_cutoff.
  double band_scale = 1.0;
  int band_cutoff = 0;
  /// Draw alpha_0 from the mixture (N(s,1) + N(-s,1))/2 instead of N(s,1).
  bool symmetric_alpha0 = false;
  /// Envelope profile: coefficient j of the band gets min(1, band_scale sqrt(j!) / r^{|j|})
  /// instead of the flat band_scale; band_scale may then exceed 1.
  bool envelope_profile = false;

  /// Proof-event defaults: cutoff ceil(48 m r^2) (real) or ceil(24 m r^2) (complex); the
  /// complex band scale makes P(|alpha_j| <= e^{-(1+m/2) r^2}) exactly 1/2.
  static TiltSpec proof_default(TiltKind kind, int m, double r, double shift_alpha0);
};

/// Importance-sampling draw. alpha_0 is shifted, the band is rescaled, the rest is plain;
/// log_weight is the exact log likelihood ratio at the drawn point.
CoefficientDraw tilted_draw(const NormalStream& stream, const TruncationPlan& plan, const TiltSpec& tilt);

}  // namespace bfholes
