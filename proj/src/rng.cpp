#include "bfholes/rng.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>

#include "bfholes/errors.hpp"

namespace bfholes {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

const char* to_string(StreamRole role) {
  switch (role) {
    case StreamRole::coefficients: return "coefficients";
    case StreamRole::quadrature: return "quadrature";
    case StreamRole::oracle: return "oracle";
  }
  return "unknown";
}

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

NormalStream::NormalStream(RngStreamSpec spec)
    : spec_(spec),
      key_{static_cast<std::uint32_t>(spec.master_seed), static_cast<std::uint32_t>(spec.master_seed >> 32)} {}

std::uint64_t NormalStream::bits(std::uint64_t index) const {
  if (index > kMaxIndex) throw InvalidArgument("stream index out of range");
  // Each block yields two 64-bit words. Counter layout:
  //   word0 = block index (low 32), word1 = block index (high 14) | role << 16,
  //   word2/word3 = trial id.
  const std::uint64_t block = index >> 1;
  const PhiloxCounter ctr{static_cast<std::uint32_t>(block),
                          static_cast<std::uint32_t>((block >> 32) & 0xFFFFu) |
                              (static_cast<std::uint32_t>(spec_.role) << 16),
                          static_cast<std::uint32_t>(spec_.trial_id),
                          static_cast<std::uint32_t>(spec_.trial_id >> 32)};
  const PhiloxCounter out = philox4x32_10(ctr, key_);
  const std::size_t half = static_cast<std::size_t>(index & 1u) * 2;
  return (static_cast<std::uint64_t>(out[half]) << 32) | out[half + 1];
}

double NormalStream::uniform(std::uint64_t index) const {
  return (static_cast<double>(bits(index) >> 11) + 0.5) * 0x1.0p-53;
}

double NormalStream::normal(std::uint64_t index) const { return normal_quantile(uniform(index)); }

void NormalStream::fill_normal(std::span<double> out, std::uint64_t first_index) const {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = normal(first_index + i);
}

void NormalStream::fill_uniform(std::span<double> out, std::uint64_t first_index) const {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = uniform(first_index + i);
}

NormalStream derive_stream(const RngStreamSpec& spec) { return NormalStream(spec); }

double normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw InvalidArgument("normal quantile needs u in (0, 1)");
  // Use the tail closest to u so small probabilities keep full relative precision.
  if (u < 0.5) return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * (1.0 - u));
}

}  // namespace bfholes
