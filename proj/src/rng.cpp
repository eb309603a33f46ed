// SPDX-License-Identifier: MIT
#include "gaussreg/rng.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>

namespace gaussreg {
namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;
constexpr std::uint64_t kUniformTag = 0x8000000000000000ull;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) noexcept {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline double to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

std::array<std::uint64_t, 2> block(std::uint64_t seed, std::uint64_t stream_id,
                                   std::uint64_t block_index) noexcept {
  const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_index),
                                static_cast<std::uint32_t>(block_index >> 32),
                                static_cast<std::uint32_t>(stream_id),
                                static_cast<std::uint32_t>(stream_id >> 32)};
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed),
                            static_cast<std::uint32_t>(seed >> 32)};
  const auto out = Philox4x32::generate(ctr, key);
  return {(static_cast<std::uint64_t>(out[0]) << 32) | out[1],
          (static_cast<std::uint64_t>(out[2]) << 32) | out[3]};
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, ctr[0], hi0, lo0);
    mulhilo(kM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

double normal_variate(std::uint64_t seed, std::uint64_t stream_id,
                      std::uint64_t index) {
  const auto bits = block(seed, stream_id, index >> 1);
  const double u = to_open_unit(bits[index & 1]);
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
}

double uniform_variate(std::uint64_t seed, std::uint64_t stream_id,
                       std::uint64_t index) noexcept {
  const auto bits = block(seed, stream_id, kUniformTag | (index >> 1));
  return to_open_unit(bits[index & 1]);
}

}  // namespace gaussreg
