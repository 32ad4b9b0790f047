#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bfholes {

/// Exponent vector j in N^m.
class MultiIndex {
 public:
  explicit MultiIndex(std::vector<int> exponents);

  int dimension() const noexcept { return static_cast<int>(exponents_.size()); }
  int l1_norm() const noexcept { return norm_; }
  std::span<const int> exponents() const noexcept { return exponents_; }
  int operator[](std::size_t k) const { return exponents_[k]; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> exponents_;
  int norm_ = 0;
};

/// Number of multi-indices in N^m with l1 norm <= max_degree, i.e. C(N+m, m).
/// Saturates at SIZE_MAX.
std::size_t count_up_to_degree(int m, int max_degree);

/// Number of multi-indices with l1 norm exactly `degree`, C(degree+m-1, m-1), as a double.
double count_at_degree(int m, int degree);

/// All j with |j| <= N, graded by degree; inside a degree the order is descending
/// lexicographic ((N,0,..) first). This is the canonical coefficient order.
std::vector<MultiIndex> enumerate_up_to_degree(int m, int max_degree);

/// Flat, cached form of the canonical enumeration used by the evaluators.
class IndexTable {
 public:
  IndexTable(int m, int max_degree);

  int dimension() const noexcept { return m_; }
  int max_degree() const noexcept { return n_; }
  std::size_t size() const noexcept { return degree_.size(); }

  std::span<const int> exponents(std::size_t pos) const {
    return {exps_.data() + pos * static_cast<std::size_t>(m_), static_cast<std::size_t>(m_)};
  }
  int degree(std::size_t pos) const { return degree_[pos]; }
  /// First position of degree d (d may equal max_degree+1, giving size()).
  std::size_t degree_begin(int d) const { return offsets_[static_cast<std::size_t>(d)]; }
  /// Position of an exponent vector, or size() when |j| > max_degree.
  std::size_t position(std::span<const int> j) const;
  /// Sum_k ln(j_k!) for the entry at pos.
  double log_factorial(std::size_t pos) const { return log_fact_[pos]; }
  /// 1/sqrt(k) for k = 0..max_degree (entry 0 is unused and set to 0).
  std::span<const double> inv_sqrt() const noexcept { return inv_sqrt_; }

 private:
  int m_;
  int n_;
  std::vector<int> exps_;
  std::vector<int> degree_;
  std::vector<std::size_t> offsets_;
  std::vector<double> log_fact_;
  std::vector<double> inv_sqrt_;
};

/// Shared, thread-safe cache of index tables keyed by (m, N).
std::shared_ptr<const IndexTable> index_table(int m, int max_degree);

double log_factorial(int n);
double log_factorial(const MultiIndex& j);

enum class Verdict { holds, violated };
const char* to_string(Verdict v);

inline constexpr double kAuditTolerance = 1e-12;

/// One numerical check of a claimed inequality. One-sided claims leave the other end
/// at +-infinity. margin > 0 means slack, margin < 0 means the claim fails.
struct BoundAudit {
  std::string claim;
  double input = 0.0;
  double claimed_lower = 0.0;
  double claimed_upper = 0.0;
  double reference_value = 0.0;
  Verdict verdict = Verdict::holds;
  double margin = 0.0;
};

/// |j|^|j| / j^j <= m^|j|, compared in log space. Requires every j_k >= 1.
BoundAudit power_ratio_bound_audit(const MultiIndex& j, int m);

/// The claimed constants: a-i) P(|a| >= lambda) <= e^{-lambda^2/2}/sqrt(2 pi),
/// a-ii) P(|a| <= lambda) in [lambda e^{-1/2}/sqrt(2 pi), lambda/sqrt(2 pi)].
/// The reference value is always the erfc/erf truth.
std::pair<BoundAudit, BoundAudit> gaussian_tail_audit(double lambda);

/// The same two statements with standard constants: Mills ratio 2 phi(lambda)/lambda and
/// the bracket [2 lambda phi(lambda), 2 lambda phi(0)].
std::pair<BoundAudit, BoundAudit> corrected_gaussian_tail_audit(double lambda);

/// 2 phi(lambda) / lambda, an upper bound on P(|a| >= lambda) for every lambda > 0.
double mills_tail_bound(double lambda);

/// E_m = sum_{l >= 2} l^m 2^{-l}.
double e_m_constant(int m);

}  // namespace bfholes
