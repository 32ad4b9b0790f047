#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bfholes/errors.hpp"
#include "bfholes/field.hpp"
#include "bfholes/multiindex.hpp"
#include "bfholes/sampling.hpp"

using namespace bfholes;

namespace {

PlanOptions free_plan(int min_degree = 0) {
  PlanOptions o;
  o.omega_floor = false;
  o.min_degree = min_degree;
  return o;
}

// sum_{j > n} 2^{j/2} R^j / sqrt(j!) for m = 1, summed term by term.
double direct_tail(double radius, int n) {
  double s = 0.0;
  for (int j = n + 1; j < n + 4000; ++j) {
    s += std::exp(0.5 * j * std::numbers::ln2 + j * std::log(radius) - 0.5 * std::lgamma(j + 1.0));
  }
  return s;
}

double log_phi(double x, double mean, double sd) {
  return -0.5 * std::pow((x - mean) / sd, 2) - std::log(sd) - 0.5 * std::log(2.0 * std::numbers::pi);
}

}  // namespace

TEST_CASE("truncation plan meets its tolerance") {
  const TruncationPlan p = truncation_plan(1, 2.0, 1e-9, free_plan());
  CHECK(p.tail_bound <= 1e-9);
  CHECK(p.degree > 0);
  const TruncationPlan q = truncation_plan(1, 0.5, 1e-9, free_plan());
  CHECK(q.degree < p.degree);
  CHECK(truncation_plan(2, 2.0, 1e-9).degree >= 384);
  CHECK(p.tail_bound_d1 >= p.tail_bound);
  CHECK(p.envelope_confidence > 0.0);
  CHECK(p.envelope_confidence <= 1.0);
}

TEST_CASE("envelope tail bound dominates the direct sum") {
  for (double radius : {0.5, 1.0, 2.0, 4.0}) {
    for (int n : {5, 20, 60}) {
      const double direct = direct_tail(radius, n);
      const double bound = envelope_tail_bound(1, radius, n);
      CHECK(bound >= direct * (1.0 - 1e-12));
      CHECK(bound <= 2.0 * direct + 1e-300);
    }
  }
}

TEST_CASE("resource cap refuses oversized plans") {
  PlanOptions o = free_plan();
  o.max_coefficients = 1000;
  CHECK_THROWS_AS(truncation_plan(3, 3.0, 1e-9, o), ResourceCapExceeded);
  CHECK_THROWS_AS(truncation_plan(1, 1.0, 0.0), InvalidArgument);
}

TEST_CASE("quadruple-degree oracle on a real grid") {
  const TruncationPlan p = truncation_plan(1, 2.0, 1e-9, free_plan());
  const TruncationPlan p4 = truncation_plan(1, 2.0, 1e-9, free_plan(4 * p.degree));
  REQUIRE(p4.degree >= 4 * p.degree);
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const NormalStream s({5, t, StreamRole::coefficients});
    const auto d = draw_coefficients(s, p);
    const auto d4 = draw_coefficients(s, p4);
    for (std::size_t i = 0; i < d.values.size(); ++i) REQUIRE(d.values[i] == d4.values[i]);
    for (int k = 0; k <= 1000; ++k) {
      const double x = -2.0 + 4.0 * k / 1000.0;
      worst = std::max(worst, std::abs(evaluate_real(d, std::span(&x, 1)) - evaluate_real(d4, std::span(&x, 1))));
    }
  }
  CHECK(worst <= p.tail_bound);
}

TEST_CASE("plain draws: moments of the first coefficients") {
  const TruncationPlan p = truncation_plan(1, 1.0, 1e-6, free_plan());
  const int n = 100000;
  std::vector<double> sum(10, 0.0), sq(10, 0.0);
  for (int t = 0; t < n; ++t) {
    const auto d = draw_coefficients(NormalStream({9, static_cast<std::uint64_t>(t), StreamRole::coefficients}), p);
    CHECK(d.log_weight == 0.0);
    for (std::size_t k = 0; k < 10; ++k) {
      sum[k] += d.values[k];
      sq[k] += d.values[k] * d.values[k];
    }
  }
  CHECK(std::abs(sum[0] / n) < 0.02);
  for (std::size_t k = 0; k < 10; ++k) CHECK(std::abs(sq[k] / n - 1.0) < 0.03);
}

TEST_CASE("trial streams are uncorrelated") {
  const int n = 100000;
  const NormalStream a({3, 0, StreamRole::coefficients}), b({3, 1, StreamRole::coefficients});
  double sab = 0.0;
  for (int i = 0; i < n; ++i) sab += a.normal(static_cast<std::uint64_t>(i)) * b.normal(static_cast<std::uint64_t>(i));
  CHECK(std::abs(sab / n) < 0.01);
}

TEST_CASE("identity tilt has zero log weight") {
  const TruncationPlan p = truncation_plan(1, 1.0, 1e-9, free_plan(4));
  TiltSpec t;
  t.band_cutoff = 4;
  const auto d = tilted_draw(NormalStream({1, 0, StreamRole::coefficients}), p, t);
  CHECK(d.log_weight == 0.0);
  t.band_scale = 0.0;
  CHECK_THROWS_AS(tilted_draw(NormalStream({1, 0, StreamRole::coefficients}), p, t), InvalidArgument);
}

TEST_CASE("tilted log weight equals the explicit density ratio") {
  const TruncationPlan p = truncation_plan(1, 1.5, 1e-9, free_plan(6));
  for (bool symmetric : {false, true}) {
    TiltSpec t;
    t.shift_alpha0 = 2.5;
    t.band_scale = 0.6;
    t.band_cutoff = 6;
    t.symmetric_alpha0 = symmetric;
    for (std::uint64_t k = 0; k < 20; ++k) {
      const auto d = tilted_draw(NormalStream({11, k, StreamRole::coefficients}), p, t);
      const double a0 = d.values[0];
      double lw = log_phi(a0, 0.0, 1.0);
      lw -= symmetric ? std::log(0.5 * std::exp(log_phi(a0, 2.5, 1.0)) + 0.5 * std::exp(log_phi(a0, -2.5, 1.0)))
                      : log_phi(a0, 2.5, 1.0);
      for (std::size_t j = 1; j <= 6; ++j) lw += log_phi(d.values[j], 0.0, 1.0) - log_phi(d.values[j], 0.0, 0.6);
      CHECK(d.log_weight == doctest::Approx(lw).epsilon(1e-10));
    }
  }
}

TEST_CASE("envelope profile log weight equals the explicit density ratio") {
  const TruncationPlan p = truncation_plan(1, 2.0, 1e-9, free_plan(10));
  TiltSpec t;
  t.kind = TiltKind::complex_hole;
  t.r = 2.0;
  t.shift_alpha0 = 3.0;
  t.band_scale = 1.5;
  t.band_cutoff = 10;
  t.symmetric_alpha0 = true;
  t.envelope_profile = true;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto d = tilted_draw(NormalStream({12, k, StreamRole::coefficients}), p, t);
    const double a0 = d.values[0];
    double lw = log_phi(a0, 0.0, 1.0) -
                std::log(0.5 * std::exp(log_phi(a0, 3.0, 1.0)) + 0.5 * std::exp(log_phi(a0, -3.0, 1.0)));
    for (int j = 1; j <= 10; ++j) {
      const double sj = std::min(1.0, 1.5 * std::sqrt(std::tgamma(j + 1.0)) / std::pow(2.0, j));
      lw += log_phi(d.values[static_cast<std::size_t>(j)], 0.0, 1.0) - log_phi(d.values[static_cast<std::size_t>(j)], 0.0, sj);
    }
    CHECK(d.log_weight == doctest::Approx(lw).epsilon(1e-10));
  }
  t.band_scale = 0.0;
  CHECK_THROWS_AS(tilted_draw(NormalStream({12, 0, StreamRole::coefficients}), p, t), InvalidArgument);
}

TEST_CASE("likelihood ratios average to one") {
  const TruncationPlan p = truncation_plan(1, 1.0, 1e-6, free_plan(3));
  TiltSpec t;
  t.shift_alpha0 = 1.0;
  t.band_scale = 0.8;
  t.band_cutoff = 3;
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double w =
        std::exp(tilted_draw(NormalStream({2, static_cast<std::uint64_t>(k), StreamRole::coefficients}), p, t).log_weight);
    s += w;
    s2 += w * w;
  }
  const double mean = s / n;
  const double se = std::sqrt((s2 / n - mean * mean) / n);
  CHECK(std::abs(mean - 1.0) <= 3.0 * se);
}

TEST_CASE("shift 5 puts alpha_0 above E_1 + 1") {
  const TruncationPlan p = truncation_plan(1, 1.0, 1e-6, free_plan(1));
  TiltSpec t;
  t.shift_alpha0 = 5.0;
  t.band_cutoff = 1;
  int above = 0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    if (tilted_draw(NormalStream({4, static_cast<std::uint64_t>(k), StreamRole::coefficients}), p, t).values[0] >=
        e_m_constant(1) + 1.0)
      ++above;
  }
  CHECK(above > 0.99 * n);
}

TEST_CASE("complex-hole default band scale halves the band event") {
  const TiltSpec t = TiltSpec::proof_default(TiltKind::complex_hole, 1, 1.0, 0.0);
  const double bound = std::exp(-1.5);
  CHECK(std::erf(bound / (t.band_scale * std::numbers::sqrt2)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(t.band_cutoff == omega_complex_cutoff(1, 1.0));
  CHECK(omega_real_cutoff(1, 1.0) == 48);
}
