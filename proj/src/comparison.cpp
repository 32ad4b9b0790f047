#include "bfholes/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bfholes/errors.hpp"
#include "bfholes/parallel.hpp"
#include "bfholes/rare_events.hpp"
#include "bfholes/rng.hpp"

namespace bfholes {

namespace {

constexpr std::size_t kDirectPairCap = 10'000;
constexpr std::size_t kPsdCheckCap = 400;
constexpr std::size_t kMaxOracleDimension = 25;

void check_psd(const Eigen::MatrixXd& c) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw InvalidArgument("eigenvalue computation failed");
  if (es.eigenvalues().minCoeff() < -1e-10) throw InvalidArgument("covariance matrix is not positive semidefinite");
}

}  // namespace

const char* to_string(LatticeVariant v) { return v == LatticeVariant::symmetric ? "symmetric" : "nonnegative"; }

LatticeVariant lattice_variant_from_string(const std::string& s) {
  if (s == "symmetric") return LatticeVariant::symmetric;
  if (s == "nonnegative") return LatticeVariant::nonnegative;
  throw InvalidArgument("unknown lattice variant '" + s + "'");
}

double li_shao_pair_term(double a) {
  if (!(std::abs(a) < 1.0)) throw InvalidArgument("degenerate lattice: off-diagonal covariance with |a| >= 1");
  return -std::log1p(-2.0 * std::asin(a) / std::numbers::pi);
}

double bivariate_orthant(double rho) {
  if (!(std::abs(rho) <= 1.0)) throw InvalidArgument("correlation must lie in [-1, 1]");
  return 0.25 + std::asin(rho) / (2.0 * std::numbers::pi);
}

Eigen::MatrixXd gaussian_covariance(const std::vector<std::vector<double>>& points) {
  const std::size_t n = points.size();
  Eigen::MatrixXd c(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    c(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < points[i].size(); ++k) d2 += (points[i][k] - points[j][k]) * (points[i][k] - points[j][k]);
      c(i, j) = c(j, i) = std::exp(-0.5 * d2);
    }
  }
  return c;
}

LatticeSpec build_lattice(int m, double r, double spacing, LatticeVariant variant, std::size_t max_points) {
  if (m < 1) throw InvalidArgument("dimension m must be >= 1");
  if (!(r > 0.0)) throw InvalidArgument("lattice radius must be positive");
  if (!(spacing > 0.0)) throw InvalidArgument("lattice spacing must be positive");
  const long long k_max = static_cast<long long>(std::floor(r / spacing + 1e-12));
  const long long k_min = variant == LatticeVariant::symmetric ? -k_max : 0;
  const long long per_axis = k_max - k_min + 1;
  double total = 1.0;
  for (int k = 0; k < m; ++k) total *= static_cast<double>(per_axis);
  if (total > static_cast<double>(max_points)) {
    throw ResourceCapExceeded("lattice has " + std::to_string(static_cast<long long>(total)) +
                              " points, above the cap of " + std::to_string(max_points));
  }
  LatticeSpec lat;
  lat.m = m;
  lat.r = r;
  lat.spacing = spacing;
  lat.variant = variant;
  lat.per_axis = static_cast<int>(per_axis);
  const std::size_t n = static_cast<std::size_t>(total);
  lat.coords.resize(n * static_cast<std::size_t>(m));
  std::vector<long long> idx(static_cast<std::size_t>(m), k_min);
  for (std::size_t p = 0; p < n; ++p) {
    for (int k = 0; k < m; ++k) lat.coords[p * static_cast<std::size_t>(m) + static_cast<std::size_t>(k)] = spacing * static_cast<double>(idx[static_cast<std::size_t>(k)]);
    for (int k = m - 1; k >= 0; --k) {
      if (++idx[static_cast<std::size_t>(k)] <= k_max) break;
      idx[static_cast<std::size_t>(k)] = k_min;
    }
  }
  if (n <= LatticeSpec::kMaterializeCap) {
    lat.covariance.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      lat.covariance(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
      for (std::size_t j = 0; j < i; ++j) {
        double d2 = 0.0;
        for (int k = 0; k < m; ++k) {
          const double d = lat.point(i)[static_cast<std::size_t>(k)] - lat.point(j)[static_cast<std::size_t>(k)];
          d2 += d * d;
        }
        const double a = std::exp(-0.5 * d2);
        lat.covariance(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a;
        lat.covariance(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = a;
      }
    }
    if (n <= kPsdCheckCap) check_psd(lat.covariance);
  }
  return lat;
}

LiShaoBounds li_shao_bounds(const Eigen::MatrixXd& c) {
  if (c.rows() != c.cols()) throw InvalidArgument("covariance must be square");
  LiShaoBounds b;
  b.n = static_cast<std::size_t>(c.rows());
  double s = 0.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < c.cols(); ++j) s += li_shao_pair_term(c(i, j));
  }
  b.pair_sum = s;
  b.lower = -static_cast<double>(b.n) * std::numbers::ln2;
  b.upper = b.lower + s;
  return b;
}

LiShaoBounds li_shao_bounds(const LatticeSpec& lat) {
  const std::size_t n = lat.size();
  const int m = lat.m;
  LiShaoBounds b;
  b.n = n;
  b.lower = -static_cast<double>(n) * std::numbers::ln2;
  double s = 0.0;
  if (n <= kDirectPairCap) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double d2 = 0.0;
        for (int k = 0; k < m; ++k) {
          const double d = lat.point(i)[static_cast<std::size_t>(k)] - lat.point(j)[static_cast<std::size_t>(k)];
          d2 += d * d;
        }
        s += li_shao_pair_term(std::exp(-0.5 * d2));
      }
    }
  } else {
    // Translation invariance: displacement vector delta (index units) occurs for
    // prod_k (per_axis - |delta_k|) ordered pairs; each unordered pair is seen twice.
    const int q = lat.per_axis;
    std::vector<int> delta(static_cast<std::size_t>(m), -(q - 1));
    for (;;) {
      double count = 1.0, d2 = 0.0;
      bool zero = true;
      for (int k = 0; k < m; ++k) {
        const int dk = delta[static_cast<std::size_t>(k)];
        count *= static_cast<double>(q - std::abs(dk));
        d2 += lat.spacing * lat.spacing * dk * dk;
        zero = zero && dk == 0;
      }
      if (!zero) s += 0.5 * count * li_shao_pair_term(std::exp(-0.5 * d2));
      int k = m - 1;
      for (; k >= 0; --k) {
        if (++delta[static_cast<std::size_t>(k)] <= q - 1) break;
        delta[static_cast<std::size_t>(k)] = -(q - 1);
      }
      if (k < 0) break;
    }
  }
  b.pair_sum = s;
  b.upper = b.lower + s;
  return b;
}

OrthantEstimate orthant_probability_oracle(const Eigen::MatrixXd& c, std::uint64_t trials, std::uint64_t master_seed,
                                           double z) {
  if (c.rows() != c.cols()) throw InvalidArgument("covariance must be square");
  const std::size_t n = static_cast<std::size_t>(c.rows());
  if (n == 0) throw InvalidArgument("covariance is empty");
  if (n > kMaxOracleDimension) throw InvalidArgument("orthant oracle supports at most 25 variables");
  check_psd(c);
  OrthantEstimate e;
  if (n <= 2) {
    e.exact = true;
    e.p = n == 1 ? 0.5 : bivariate_orthant(c(0, 1) / std::sqrt(c(0, 0) * c(1, 1)));
    e.ci_low = e.ci_high = e.p;
    return e;
  }
  if (trials < 1) throw InvalidArgument("trials must be >= 1");

  Eigen::MatrixXd factor;
  Eigen::LLT<Eigen::MatrixXd> llt(c);
  if (llt.info() == Eigen::Success) {
    factor = llt.matrixL();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
    const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    factor = es.eigenvectors() * root.asDiagonal();
  }

  const std::size_t chunks = static_cast<std::size_t>((trials + kTrialChunk - 1) / kTrialChunk);
  std::vector<std::uint64_t> hits(chunks, 0);
  parallel_for_chunks(chunks, [&](std::size_t ch) {
    Eigen::VectorXd g(static_cast<Eigen::Index>(n));
    std::uint64_t h = 0;
    const std::uint64_t first = static_cast<std::uint64_t>(ch) * kTrialChunk;
    const std::uint64_t last = std::min<std::uint64_t>(trials, first + kTrialChunk);
    for (std::uint64_t t = first; t < last; ++t) {
      const NormalStream stream({master_seed, t, StreamRole::oracle});
      for (std::size_t k = 0; k < n; ++k) g[static_cast<Eigen::Index>(k)] = stream.normal(k);
      const Eigen::VectorXd x = factor * g;
      if ((x.array() <= 0.0).all()) ++h;
    }
    hits[ch] = h;
  });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  e.trials = trials;
  e.p = static_cast<double>(total) / static_cast<double>(trials);
  const auto ci = wilson_interval(static_cast<double>(total), static_cast<double>(trials), z);
  e.ci_low = ci.first;
  e.ci_high = ci.second;
  return e;
}

ChainBound upper_chain_bound(double r, int m) {
  if (!(r > 0.0)) throw InvalidArgument("radius must be positive");
  if (m < 1) throw InvalidArgument("dimension m must be >= 1");
  ChainBound cb;
  cb.r = r;
  cb.m = m;
  const LatticeSpec lat = build_lattice(m, r, 2.0, LatticeVariant::symmetric, 10'000'000);
  cb.lattice_size = lat.size();
  cb.exact_pair_sum = li_shao_bounds(lat).pair_sum;

  const int jr = static_cast<int>(std::floor(r + 1e-12));
  for (int j = -jr; j <= jr; ++j) {
    if (j == 0) continue;  // weight |j|^m / 2 vanishes
    const double w = 0.5 * std::pow(std::abs(j), m);
    const double x = std::exp(-2.0 * j * j);
    cb.literal_aggregated += w * li_shao_pair_term(x);
    cb.literal_arcsin += w * std::log(std::numbers::pi / (std::numbers::pi - 3.0 * x));
    cb.literal_log1p += w * std::log1p(6.0 / std::numbers::pi * x);
    cb.log_c_m += (3.0 * std::pow(std::abs(j), m) / std::numbers::pi) * std::exp(-0.5 * j * j);
  }
  const double n = static_cast<double>(cb.lattice_size);
  cb.bound = cb.log_c_m - n * std::numbers::ln2;

  const int dmax = lat.per_axis - 1;
  for (int d = 1; d <= dmax; ++d) {
    const double w = 0.5 * n * (std::pow(2.0 * d + 1.0, m) - std::pow(2.0 * d - 1.0, m));
    const double x = std::exp(-2.0 * d * d);
    cb.corrected_aggregated += w * li_shao_pair_term(x);
    cb.corrected_arcsin += w * std::log(std::numbers::pi / (std::numbers::pi - 3.0 * x));
    cb.corrected_log1p += w * std::log1p(6.0 / std::numbers::pi * x);
    cb.corrected_linear += w * 6.0 / std::numbers::pi * x;
  }
  cb.corrected_bound = cb.corrected_linear - n * std::numbers::ln2;

  const double tol = 1e-12;
  cb.aggregation_holds = cb.literal_aggregated >= cb.exact_pair_sum - tol;
  cb.relaxations_monotone = cb.literal_arcsin >= cb.literal_aggregated - tol &&
                            cb.literal_log1p >= cb.literal_arcsin - tol && cb.log_c_m >= cb.literal_log1p - tol &&
                            cb.corrected_aggregated >= cb.exact_pair_sum - tol &&
                            cb.corrected_arcsin >= cb.corrected_aggregated - tol &&
                            cb.corrected_log1p >= cb.corrected_arcsin - tol &&
                            cb.corrected_linear >= cb.corrected_log1p - tol;
  return cb;
}

}  // namespace bfholes
