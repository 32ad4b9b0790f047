#include "bfholes/multiindex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "bfholes/errors.hpp"

namespace bfholes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

__extension__ typedef unsigned __int128 u128;

// C(d + k - 1, k - 1): tuples of length k with sum d.
std::size_t tuples_with_sum(int k, int d) {
  if (k <= 0) return d == 0 ? 1 : 0;
  if (k == 1) return 1;
  // C(d + k - 1, k - 1) by the multiplicative formula, exact while it fits.
  u128 acc = 1;
  for (int i = 1; i <= k - 1; ++i) {
    acc = acc * static_cast<u128>(d + i) / static_cast<u128>(i);
    if (acc > std::numeric_limits<std::size_t>::max()) return std::numeric_limits<std::size_t>::max();
  }
  return static_cast<std::size_t>(acc);
}

void append_degree(int m, int d, std::vector<int>& prefix, std::vector<int>& out) {
  const int k = static_cast<int>(prefix.size());
  if (k == m - 1) {
    prefix.push_back(d);
    out.insert(out.end(), prefix.begin(), prefix.end());
    prefix.pop_back();
    return;
  }
  for (int first = d; first >= 0; --first) {
    prefix.push_back(first);
    append_degree(m, d - first, prefix, out);
    prefix.pop_back();
  }
}

void check_dimension(int m) {
  if (m < 1) throw InvalidArgument("dimension m must be >= 1");
}

}  // namespace

MultiIndex::MultiIndex(std::vector<int> exponents) : exponents_(std::move(exponents)) {
  check_dimension(static_cast<int>(exponents_.size()));
  for (int e : exponents_) {
    if (e < 0) throw InvalidArgument("multi-index entries must be nonnegative");
    norm_ += e;
  }
}

std::size_t count_up_to_degree(int m, int max_degree) {
  check_dimension(m);
  if (max_degree < 0) return 0;
  return tuples_with_sum(m + 1, max_degree);
}

double count_at_degree(int m, int degree) {
  if (degree < 0) return 0.0;
  if (m == 1) return 1.0;
  return std::exp(std::lgamma(degree + m) - std::lgamma(degree + 1.0) - std::lgamma(static_cast<double>(m)));
}

std::vector<MultiIndex> enumerate_up_to_degree(int m, int max_degree) {
  check_dimension(m);
  if (max_degree < 0) throw InvalidArgument("max degree must be >= 0");
  std::vector<int> flat;
  std::vector<int> prefix;
  for (int d = 0; d <= max_degree; ++d) append_degree(m, d, prefix, flat);
  std::vector<MultiIndex> out;
  out.reserve(flat.size() / static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < flat.size(); i += static_cast<std::size_t>(m)) {
    out.emplace_back(std::vector<int>(flat.begin() + static_cast<std::ptrdiff_t>(i),
                                      flat.begin() + static_cast<std::ptrdiff_t>(i + m)));
  }
  return out;
}

IndexTable::IndexTable(int m, int max_degree) : m_(m), n_(max_degree) {
  check_dimension(m);
  if (max_degree < 0) throw InvalidArgument("max degree must be >= 0");
  std::vector<int> prefix;
  offsets_.reserve(static_cast<std::size_t>(max_degree) + 2);
  for (int d = 0; d <= max_degree; ++d) {
    offsets_.push_back(exps_.size() / static_cast<std::size_t>(m));
    append_degree(m, d, prefix, exps_);
  }
  const std::size_t count = exps_.size() / static_cast<std::size_t>(m);
  offsets_.push_back(count);
  degree_.resize(count);
  log_fact_.resize(count);
  for (int d = 0; d <= max_degree; ++d) {
    for (std::size_t p = offsets_[static_cast<std::size_t>(d)]; p < offsets_[static_cast<std::size_t>(d) + 1]; ++p) {
      degree_[p] = d;
      double lf = 0.0;
      for (int e : exponents(p)) lf += bfholes::log_factorial(e);
      log_fact_[p] = lf;
    }
  }
  inv_sqrt_.resize(static_cast<std::size_t>(max_degree) + 1, 0.0);
  for (int k = 1; k <= max_degree; ++k) inv_sqrt_[static_cast<std::size_t>(k)] = 1.0 / std::sqrt(static_cast<double>(k));
}

std::size_t IndexTable::position(std::span<const int> j) const {
  if (static_cast<int>(j.size()) != m_) throw InvalidArgument("multi-index dimension mismatch");
  int d = 0;
  for (int e : j) d += e;
  if (d > n_) return size();
  std::size_t rank = 0;
  int remaining = d;
  for (int k = 0; k + 1 < m_; ++k) {
    const int tail_len = m_ - k - 1;
    for (int f = remaining; f > j[static_cast<std::size_t>(k)]; --f) rank += tuples_with_sum(tail_len, remaining - f);
    remaining -= j[static_cast<std::size_t>(k)];
  }
  return offsets_[static_cast<std::size_t>(d)] + rank;
}

std::shared_ptr<const IndexTable> index_table(int m, int max_degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const IndexTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{m, max_degree}];
  if (!slot) slot = std::make_shared<const IndexTable>(m, max_degree);
  return slot;
}

double log_factorial(int n) {
  if (n < 0) throw InvalidArgument("factorial of a negative integer");
  if (n < 2) return 0.0;
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_factorial(const MultiIndex& j) {
  double acc = 0.0;
  for (int e : j.exponents()) acc += log_factorial(e);
  return acc;
}

const char* to_string(Verdict v) { return v == Verdict::holds ? "holds" : "violated"; }

namespace {

BoundAudit make_audit(std::string claim, double input, double lower, double upper, double reference) {
  BoundAudit a;
  a.claim = std::move(claim);
  a.input = input;
  a.claimed_lower = lower;
  a.claimed_upper = upper;
  a.reference_value = reference;
  a.margin = std::min(reference - lower, upper - reference);
  a.verdict = a.margin >= -kAuditTolerance ? Verdict::holds : Verdict::violated;
  return a;
}

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be a positive finite number");
}

}  // namespace

BoundAudit power_ratio_bound_audit(const MultiIndex& j, int m) {
  check_dimension(m);
  if (j.dimension() != m) throw InvalidArgument("multi-index dimension does not match m");
  for (int e : j.exponents()) {
    if (e < 1) throw InvalidArgument("power ratio bound needs every entry >= 1");
  }
  const double n = j.l1_norm();
  double lhs = n * std::log(n);
  for (int e : j.exponents()) lhs -= e * std::log(static_cast<double>(e));
  const double rhs = n * std::log(static_cast<double>(m));
  return make_audit("log(|j|^|j| / j^j) <= |j| log m", n, -kInf, rhs, lhs);
}

std::pair<BoundAudit, BoundAudit> gaussian_tail_audit(double lambda) {
  check_lambda(lambda);
  const double root2pi = std::sqrt(2.0 * std::numbers::pi);
  const double tail = std::erfc(lambda / std::numbers::sqrt2);
  const double body = std::erf(lambda / std::numbers::sqrt2);
  auto ai = make_audit("P(|a|>=l) <= e^{-l^2/2}/sqrt(2pi)", lambda, -kInf,
                       std::exp(-0.5 * lambda * lambda) / root2pi, tail);
  auto aii = make_audit("P(|a|<=l) in [l e^{-1/2}/sqrt(2pi), l/sqrt(2pi)]", lambda,
                        lambda * std::exp(-0.5) / root2pi, lambda / root2pi, body);
  return {ai, aii};
}

std::pair<BoundAudit, BoundAudit> corrected_gaussian_tail_audit(double lambda) {
  check_lambda(lambda);
  const double tail = std::erfc(lambda / std::numbers::sqrt2);
  const double body = std::erf(lambda / std::numbers::sqrt2);
  auto ai = make_audit("P(|a|>=l) <= 2 phi(l)/l", lambda, -kInf, mills_tail_bound(lambda), tail);
  auto aii = make_audit("P(|a|<=l) in [2 l phi(l), 2 l phi(0)]", lambda, 2.0 * lambda * std_normal_pdf(lambda),
                        2.0 * lambda * std_normal_pdf(0.0), body);
  return {ai, aii};
}

double mills_tail_bound(double lambda) {
  check_lambda(lambda);
  return 2.0 * std_normal_pdf(lambda) / lambda;
}

double e_m_constant(int m) {
  check_dimension(m);
  double sum = 0.0;
  for (int l = 2;; ++l) {
    const double term = std::exp(m * std::log(static_cast<double>(l)) - l * std::numbers::ln2);
    sum += term;
    // Consecutive-term ratio is decreasing in l, so once below 1 the rest is dominated geometrically.
    const double ratio = 0.5 * std::pow(1.0 + 1.0 / l, m);
    if (ratio < 1.0 && term * ratio / (1.0 - ratio) <= 1e-17 * sum) {
      sum += term * ratio / (1.0 - ratio);
      break;
    }
  }
  return sum;
}

}  // namespace bfholes
