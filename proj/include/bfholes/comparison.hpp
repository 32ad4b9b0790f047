#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bfholes {

enum class LatticeVariant { symmetric, nonnegative };
const char* to_string(LatticeVariant v);
LatticeVariant lattice_variant_from_string(const std::string& s);

/// Points spacing * k in [-r, r]^m (symmetric: k in [-K, K]^m; nonnegative: k in [0, K]^m).
/// The covariance e^{-|s-t|^2/2} is materialized up to kMaterializeCap points.
struct LatticeSpec {
  static constexpr std::size_t kMaterializeCap = 2000;

  int m = 1;
  double r = 0.0;
  double spacing = 2.0;
  LatticeVariant variant = LatticeVariant::symmetric;
  int per_axis = 1;
  std::vector<double> coords;  // row-major, size() * m
  Eigen::MatrixXd covariance;  // empty above the cap

  std::size_t size() const { return coords.size() / static_cast<std::size_t>(m); }
  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * static_cast<std::size_t>(m), static_cast<std::size_t>(m)};
  }
};

LatticeSpec build_lattice(int m, double r, double spacing = 2.0, LatticeVariant variant = LatticeVariant::symmetric,
                          std::size_t max_points = 100'000);

/// e^{-|s-t|^2 / 2}
Eigen::MatrixXd gaussian_covariance(const std::vector<std::vector<double>>& points);

struct LiShaoBounds {
  std::size_t n = 0;
  double lower = 0.0;     // -n log 2
  double upper = 0.0;     // lower + pair_sum
  double pair_sum = 0.0;  // sum_{k<j} log(pi / (pi - 2 arcsin a_kj))
};

/// Pair sum by direct loop up to 10^4 points, by displacement counts beyond.
LiShaoBounds li_shao_bounds(const LatticeSpec& lattice);
LiShaoBounds li_shao_bounds(const Eigen::MatrixXd& covariance);

/// log(pi / (pi - 2 arcsin a)) for |a| < 1.
double li_shao_pair_term(double a);

/// P(X1 <= 0, X2 <= 0) = 1/4 + arcsin(rho) / (2 pi)
double bivariate_orthant(double rho);

struct OrthantEstimate {
  double p = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t trials = 0;
  bool exact = false;
};

/// P(all X_k <= 0) for X ~ N(0, covariance). n <= 2 is exact; up to 25 by Monte Carlo with
/// a Wilson interval at the given z (oracle stream role, trial ids 0..trials-1).
OrthantEstimate orthant_probability_oracle(const Eigen::MatrixXd& covariance, std::uint64_t trials,
                                           std::uint64_t master_seed, double z = 1.959963984540054);

/// The upper-bound chain for the lattice J = (2Z)^m cap [-r, r]^m, in log space.
/// Literal steps use weights |j|^m / 2 over j = -floor(r)..floor(r);
/// the corrected chain aggregates pairs by l-infinity index distance d with at most
/// (2d+1)^m - (2d-1)^m partners per point, which is always a valid upper bound.
struct ChainBound {
  double r = 0.0;
  int m = 1;
  std::size_t lattice_size = 0;
  double exact_pair_sum = 0.0;  // from li_shao_bounds
  double literal_aggregated = 0.0;  // sum (|j|^m/2) log(pi / (pi - 2 arcsin e^{-2 j^2}))
  double literal_arcsin = 0.0;      // arcsin x <= 3x/2
  double literal_log1p = 0.0;       // pi / (pi - 3x) <= 1 + 6x/pi
  double log_c_m = 0.0;             // log(1 + y) <= y: sum (3 |j|^m / pi) e^{-j^2/2}
  double bound = 0.0;               // log C_m - |J| log 2
  double corrected_aggregated = 0.0;
  double corrected_arcsin = 0.0;
  double corrected_log1p = 0.0;
  double corrected_linear = 0.0;
  double corrected_bound = 0.0;
  bool aggregation_holds = true;  // literal_aggregated >= exact_pair_sum
  bool relaxations_monotone = true;
};

ChainBound upper_chain_bound(double r, int m);

}  // namespace bfholes
