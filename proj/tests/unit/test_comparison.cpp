#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bfholes/comparison.hpp"
#include "bfholes/errors.hpp"

using namespace bfholes;

namespace {

// P(X1, X2, X3 <= 0) = 1/8 + (asin r12 + asin r13 + asin r23) / (4 pi).
double trivariate_orthant(const Eigen::MatrixXd& c) {
  return 0.125 + (std::asin(c(0, 1)) + std::asin(c(0, 2)) + std::asin(c(1, 2))) / (4.0 * std::numbers::pi);
}

double brute_pair_sum(const LatticeSpec& lat) {
  double s = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i)
    for (std::size_t j = i + 1; j < lat.size(); ++j) {
      double d2 = 0.0;
      for (int k = 0; k < lat.m; ++k) d2 += std::pow(lat.point(i)[static_cast<std::size_t>(k)] - lat.point(j)[static_cast<std::size_t>(k)], 2);
      const double a = std::exp(-0.5 * d2);
      s += std::log(std::numbers::pi / (std::numbers::pi - 2.0 * std::asin(a)));
    }
  return s;
}

}  // namespace

TEST_CASE("lattice construction") {
  const auto a = build_lattice(1, 2.0);
  REQUIRE(a.size() == 3);
  CHECK(a.point(0)[0] == -2.0);
  CHECK(a.point(1)[0] == 0.0);
  CHECK(a.point(2)[0] == 2.0);
  CHECK(build_lattice(1, 1.9).size() == 1);
  CHECK(build_lattice(2, 2.0).size() == 9);
  CHECK(build_lattice(1, 4.0, 2.0, LatticeVariant::nonnegative).size() == 3);
  CHECK(build_lattice(1, 2.0).covariance(0, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(build_lattice(3, 100.0), ResourceCapExceeded);
  CHECK(build_lattice(3, 30.0).covariance.size() == 0);
  CHECK(lattice_variant_from_string("nonnegative") == LatticeVariant::nonnegative);
}

TEST_CASE("Li-Shao bracket small cases") {
  const auto one = li_shao_bounds(build_lattice(1, 1.0));
  CHECK(one.lower == doctest::Approx(std::log(0.5)));
  CHECK(one.upper == one.lower);
  Eigen::MatrixXd c(2, 2);
  c << 1.0, std::exp(-2.0), std::exp(-2.0), 1.0;
  const auto two = li_shao_bounds(c);
  CHECK(std::exp(two.upper) == doctest::Approx(0.25 * 1.0945979).epsilon(1e-6));
  CHECK(std::exp(two.upper) == doctest::Approx(0.273650).epsilon(1e-5));
  const double p = bivariate_orthant(std::exp(-2.0));
  CHECK(p == doctest::Approx(0.271605).epsilon(1e-5));
  CHECK(p >= std::exp(two.lower));
  CHECK(p <= std::exp(two.upper));
  CHECK(bivariate_orthant(0.0) == 0.25);
  Eigen::MatrixXd tiny = Eigen::MatrixXd::Identity(4, 4);
  tiny(0, 1) = tiny(1, 0) = 1e-300;
  CHECK(li_shao_bounds(tiny).upper == doctest::Approx(li_shao_bounds(tiny).lower));
  CHECK_THROWS_AS(li_shao_pair_term(1.0), InvalidArgument);
}

TEST_CASE("pair sums: direct and displacement aggregation agree with brute force") {
  for (int m = 1; m <= 3; ++m) {
    const auto lat = build_lattice(m, 6.0);
    CHECK(li_shao_bounds(lat).pair_sum == doctest::Approx(brute_pair_sum(lat)).epsilon(1e-12));
    if (lat.covariance.size() > 0) CHECK(li_shao_bounds(lat.covariance).pair_sum == doctest::Approx(brute_pair_sum(lat)).epsilon(1e-12));
  }
  const auto big = build_lattice(2, 102.0);
  REQUIRE(big.size() > 10'000);
  CHECK(li_shao_bounds(big).pair_sum == doctest::Approx(brute_pair_sum(big)).epsilon(1e-10));
}

TEST_CASE("orthant oracle") {
  Eigen::MatrixXd c2(2, 2);
  c2 << 1.0, std::exp(-2.0), std::exp(-2.0), 1.0;
  const auto e2 = orthant_probability_oracle(c2, 10, 1);
  CHECK(e2.exact);
  CHECK(e2.p == bivariate_orthant(std::exp(-2.0)));
  const auto lat = build_lattice(1, 2.0);
  const auto e3 = orthant_probability_oracle(lat.covariance, 200'000, 3, 3.290526731491926);
  CHECK_FALSE(e3.exact);
  const double truth = trivariate_orthant(lat.covariance);
  CHECK(e3.ci_low <= truth);
  CHECK(e3.ci_high >= truth);
  const auto b = li_shao_bounds(lat);
  CHECK(truth >= std::exp(b.lower));
  CHECK(truth <= std::exp(b.upper));
  Eigen::MatrixXd c(3, 3);
  c << 1, 0.5, -0.3, 0.5, 1, 0.2, -0.3, 0.2, 1;
  const auto e = orthant_probability_oracle(c, 200'000, 4, 3.290526731491926);
  CHECK(e.ci_low <= trivariate_orthant(c));
  CHECK(e.ci_high >= trivariate_orthant(c));
  CHECK(orthant_probability_oracle(c, 1000, 9).p == orthant_probability_oracle(c, 1000, 9).p);
  CHECK_THROWS_AS(orthant_probability_oracle(Eigen::MatrixXd::Identity(26, 26), 10, 1), InvalidArgument);
}

TEST_CASE("chain bound") {
  const auto cb = upper_chain_bound(3.0, 1);
  CHECK(cb.lattice_size == 3);
  double log_c = 0.0;
  for (int j = -3; j <= 3; ++j) log_c += 3.0 * std::abs(j) / std::numbers::pi * std::exp(-0.5 * j * j);
  CHECK(cb.log_c_m == doctest::Approx(log_c).epsilon(1e-14));
  CHECK(cb.bound == doctest::Approx(log_c - 3.0 * std::log(2.0)).epsilon(1e-14));
  // The literal aggregation undercounts nearest-neighbour pairs here.
  CHECK_FALSE(cb.aggregation_holds);
  const auto small = upper_chain_bound(0.5, 1);
  CHECK(small.lattice_size == 1);
  CHECK(small.bound == doctest::Approx(-std::log(2.0)));
  for (int m = 1; m <= 3; ++m) {
    for (double r : {2.0, 4.0, 7.0, 10.0}) {
      const auto c = upper_chain_bound(r, m);
      const auto b = li_shao_bounds(build_lattice(m, r, 2.0, LatticeVariant::symmetric, 10'000'000));
      CHECK(c.corrected_bound >= b.upper - 1e-12);
      CHECK(c.corrected_aggregated >= c.exact_pair_sum - 1e-12);
    }
  }
}

TEST_CASE("arcsin relaxation on the regime used") {
  for (int k = 0; k <= 10000; ++k) {
    const double x = std::exp(-2.0) * k / 10000.0;
    CHECK(2.0 * std::asin(x) <= 3.0 * x + 1e-15);
  }
}
