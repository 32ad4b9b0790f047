#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace bfholes {

enum class StreamRole : std::uint16_t { coefficients = 0, quadrature = 1, oracle = 2 };
const char* to_string(StreamRole role);

struct RngStreamSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t trial_id = 0;
  StreamRole role = StreamRole::coefficients;

  friend bool operator==(const RngStreamSpec&, const RngStreamSpec&) = default;
};

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al. 2011). A bijection of the counter for a fixed key.
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// Counter-based stream of variates. The key is the master seed; the counter packs
/// (trial_id, role, index), so distinct specs never share a counter block.
/// Variate k depends only on (spec, k): streams can be read in any order or in parallel.
class NormalStream {
 public:
  static constexpr std::uint64_t kMaxIndex = (std::uint64_t{1} << 47) - 1;

  explicit NormalStream(RngStreamSpec spec);

  const RngStreamSpec& spec() const noexcept { return spec_; }

  /// Uniform in the open interval (0, 1) with 53 random bits.
  double uniform(std::uint64_t index) const;
  /// Standard normal by inverse CDF of uniform(index).
  double normal(std::uint64_t index) const;

  void fill_normal(std::span<double> out, std::uint64_t first_index = 0) const;
  void fill_uniform(std::span<double> out, std::uint64_t first_index = 0) const;

 private:
  std::uint64_t bits(std::uint64_t index) const;

  RngStreamSpec spec_;
  PhiloxKey key_;
};

NormalStream derive_stream(const RngStreamSpec& spec);

/// Standard normal quantile, Phi^{-1}(u) for u in (0, 1).
double normal_quantile(double u);

}  // namespace bfholes
