#include "bfholes/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bfholes/errors.hpp"

namespace bfholes {

namespace {

// Cauchy-estimate margin used to turn value tail bounds into derivative tail bounds.
constexpr double kCauchyMargin = 0.25;
// Stream position of the sign variate used by the symmetric alpha_0 mixture.
constexpr std::uint64_t kSignIndex = NormalStream::kMaxIndex;

// log of the shell bound 2^{n/2} sqrt(C(n+m-1, m-1)) R^n / sqrt(n!).
double log_shell(int m, double log_radius, int n) {
  return 0.5 * n * std::numbers::ln2 + 0.5 * std::log(count_at_degree(m, n)) + n * log_radius -
         0.5 * std::lgamma(n + 1.0);
}

// log terms t_n for n = first.. until the ratio is below 1/2 and the term is below
// `log_floor`; returns them and the log of the geometric remainder after the last one.
struct ShellSeries {
  int first = 0;
  std::vector<double> log_terms;
  double log_remainder = -std::numeric_limits<double>::infinity();
};

ShellSeries shell_series(int m, double radius, int first, double log_floor) {
  ShellSeries s;
  s.first = first;
  if (radius <= 0.0) return s;
  const double lr = std::log(radius);
  double prev = log_shell(m, lr, first);
  s.log_terms.push_back(prev);
  for (int n = first + 1;; ++n) {
    const double cur = log_shell(m, lr, n);
    s.log_terms.push_back(cur);
    const double log_ratio = cur - prev;
    // The shell ratio sqrt(2) R sqrt((n+m-1)/n)/sqrt(n) decreases in n, so past this
    // point the remaining sum is at most t_n * q / (1 - q).
    if (log_ratio <= -std::numbers::ln2 && cur <= log_floor) {
      const double q = std::exp(log_ratio);
      s.log_remainder = cur + std::log(q / (1.0 - q));
      break;
    }
    prev = cur;
    if (n - first > 50'000'000) throw ResourceCapExceeded("tail series failed to converge");
  }
  return s;
}

double log_sum_exp_tail(const std::vector<double>& logs, std::size_t from, double extra) {
  double mx = extra;
  for (std::size_t i = from; i < logs.size(); ++i) mx = std::max(mx, logs[i]);
  if (!std::isfinite(mx)) return mx;
  double acc = std::exp(extra - mx);
  for (std::size_t i = from; i < logs.size(); ++i) acc += std::exp(logs[i] - mx);
  return mx + std::log(acc);
}

}  // namespace

int omega_real_cutoff(int m, double r) { return static_cast<int>(std::ceil(48.0 * m * r * r - 1e-9)); }
int omega_complex_cutoff(int m, double r) { return static_cast<int>(std::ceil(24.0 * m * r * r - 1e-9)); }

double envelope_tail_bound(int m, double radius, int degree, int derivative_order) {
  if (m < 1) throw InvalidArgument("dimension m must be >= 1");
  if (radius < 0.0) throw InvalidArgument("radius must be nonnegative");
  if (derivative_order < 0 || derivative_order > 2) throw InvalidArgument("derivative order must be 0, 1 or 2");
  if (derivative_order > 0) {
    // Cauchy estimate on a disc of radius kCauchyMargin in one coordinate.
    const double outer = envelope_tail_bound(m, radius + kCauchyMargin, degree, 0);
    const double factorial = derivative_order == 1 ? 1.0 : 2.0;
    return factorial * outer / std::pow(kCauchyMargin, derivative_order);
  }
  if (radius == 0.0) return 0.0;
  const auto s = shell_series(m, radius, degree + 1, -60.0);
  return std::exp(log_sum_exp_tail(s.log_terms, 0, s.log_remainder));
}

double envelope_confidence(int m, int degree) {
  double log_conf = 0.0;
  for (int n = degree + 1;; ++n) {
    const double p_out = std::erfc(std::exp(0.5 * n * std::numbers::ln2) / std::numbers::sqrt2);
    if (p_out == 0.0) break;
    log_conf += count_at_degree(m, n) * std::log1p(-p_out);
  }
  return std::exp(log_conf);
}

TruncationPlan truncation_plan(int m, double radius, double epsilon, PlanOptions options) {
  if (m < 1) throw InvalidArgument("dimension m must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("radius must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  int start = std::max(options.min_degree, 0);
  if (options.omega_floor) start = std::max(start, omega_real_cutoff(m, radius));

  const double log_eps = std::log(epsilon);
  const auto series = shell_series(m, radius, start + 1, log_eps - 5.0);
  // suffix[i] = log sum_{n >= first + i} t_n (+ remainder)
  std::vector<double> suffix(series.log_terms.size() + 1);
  suffix.back() = series.log_remainder;
  for (std::size_t i = series.log_terms.size(); i-- > 0;) {
    const double a = series.log_terms[i];
    const double b = suffix[i + 1];
    const double mx = std::max(a, b);
    suffix[i] = std::isfinite(mx) ? mx + std::log(std::exp(a - mx) + std::exp(b - mx)) : mx;
  }
  // Degree N discards shells n >= N + 1, i.e. suffix index N + 1 - first.
  int degree = start;
  while (suffix[static_cast<std::size_t>(degree + 1 - series.first)] > log_eps) ++degree;

  TruncationPlan plan;
  plan.m = m;
  plan.radius = radius;
  plan.degree = degree;
  if (plan.coefficient_count() > options.max_coefficients) {
    throw ResourceCapExceeded("truncation plan needs " + std::to_string(plan.coefficient_count()) +
                              " coefficients, above the cap of " + std::to_string(options.max_coefficients));
  }
  plan.tail_bound = std::exp(suffix[static_cast<std::size_t>(degree + 1 - series.first)]);
  plan.tail_bound_d1 = envelope_tail_bound(m, radius, degree, 1);
  plan.tail_bound_d2 = envelope_tail_bound(m, radius, degree, 2);
  plan.envelope_confidence = envelope_confidence(m, degree);
  return plan;
}

CoefficientDraw make_draw(const TruncationPlan& plan, std::vector<double> values) {
  CoefficientDraw d;
  d.plan = plan;
  d.indices = index_table(plan.m, plan.degree);
  if (values.size() > d.indices->size()) throw InvalidArgument("more coefficients than the plan holds");
  values.resize(d.indices->size(), 0.0);
  d.values = std::move(values);
  return d;
}

CoefficientDraw draw_coefficients(const NormalStream& stream, const TruncationPlan& plan) {
  CoefficientDraw d;
  d.plan = plan;
  d.indices = index_table(plan.m, plan.degree);
  d.values.resize(d.indices->size());
  stream.fill_normal(d.values);
  d.stream = stream.spec();
  return d;
}

const char* to_string(TiltKind kind) { return kind == TiltKind::real_hole ? "real_hole" : "complex_hole"; }

TiltSpec TiltSpec::proof_default(TiltKind kind, int m, double r, double shift_alpha0) {
  TiltSpec t;
  t.kind = kind;
  t.m = m;
  t.r = r;
  t.shift_alpha0 = shift_alpha0;
  if (kind == TiltKind::real_hole) {
    t.band_cutoff = omega_real_cutoff(m, r);
    t.band_scale = 1.0;
  } else {
    t.band_cutoff = omega_complex_cutoff(m, r);
    const double bound = std::exp(-(1.0 + 0.5 * m) * r * r);
    t.band_scale = std::min(1.0, bound / normal_quantile(0.75));
  }
  return t;
}

CoefficientDraw tilted_draw(const NormalStream& stream, const TruncationPlan& plan, const TiltSpec& tilt) {
  if (!(tilt.band_scale > 0.0) || (tilt.band_scale > 1.0 && !tilt.envelope_profile))
    throw InvalidArgument("band_scale must lie in (0, 1] (any positive value with the envelope profile)");
  if (tilt.band_cutoff < 0) throw InvalidArgument("band_cutoff must be nonnegative");
  if (tilt.shift_alpha0 < 0.0) throw InvalidArgument("shift_alpha0 must be nonnegative");
  if (tilt.m != plan.m) throw InvalidArgument("tilt dimension does not match the plan");
  if (plan.degree < tilt.band_cutoff) throw InvalidArgument("plan degree is below the tilt band cutoff");

  CoefficientDraw d = draw_coefficients(stream, plan);
  const double s = tilt.shift_alpha0;
  double log_w = 0.0;

  if (s > 0.0) {
    const double z = d.values[0];
    if (tilt.symmetric_alpha0) {
      const double a = stream.uniform(kSignIndex) < 0.5 ? z - s : z + s;
      // phi(a) / ((phi(a - s) + phi(a + s)) / 2) = e^{s^2/2} / cosh(s a)
      const double x = std::abs(s * a);
      const double log_cosh = x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2;
      log_w += 0.5 * s * s - log_cosh;
      d.values[0] = a;
    } else {
      const double a = z + s;
      log_w += -s * a + 0.5 * s * s;
      d.values[0] = a;
    }
  }

  const double sigma = tilt.band_scale;
  if (tilt.envelope_profile) {
    if (!(tilt.r > 0.0)) throw InvalidArgument("envelope profile needs r > 0");
    const IndexTable& idx = *d.indices;
    const std::size_t end = idx.degree_begin(tilt.band_cutoff + 1);
    const double log_r = std::log(tilt.r);
    for (std::size_t i = idx.degree_begin(1); i < end; ++i) {
      const double ls = std::min(0.0, std::log(sigma) + 0.5 * idx.log_factorial(i) - idx.degree(i) * log_r);
      const double sj = std::exp(ls);
      const double z = d.values[i];
      log_w += ls + 0.5 * (1.0 - sj * sj) * z * z;
      d.values[i] = sj * z;
    }
  } else if (sigma != 1.0) {
    const std::size_t end = d.indices->degree_begin(tilt.band_cutoff + 1);
    const double log_sigma = std::log(sigma);
    const double k = 0.5 * (1.0 - sigma * sigma);
    for (std::size_t i = d.indices->degree_begin(1); i < end; ++i) {
      const double z = d.values[i];
      // phi(sigma z) / (phi(z) / sigma)
      log_w += log_sigma + k * z * z;
      d.values[i] = sigma * z;
    }
  }
  d.log_weight = log_w;
  return d;
}

}  // namespace bfholes
