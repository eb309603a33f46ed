// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <cstdint>

namespace gaussreg {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
/// Stateless: output is a pure function of (counter, key).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  [[nodiscard]] static Counter generate(Counter ctr, Key key) noexcept;
};

/// Standard normal variate number `index` of stream `stream_id` under `seed`.
/// Two variates share one Philox block; uniforms are mapped to the open
/// interval (0,1) with 53-bit resolution and transformed by the inverse CDF.
[[nodiscard]] double normal_variate(std::uint64_t seed, std::uint64_t stream_id,
                                    std::uint64_t index);

/// Uniform on (0,1) from the same counter space, tagged so it never collides
/// with the normal stream of the same (seed, stream_id).
[[nodiscard]] double uniform_variate(std::uint64_t seed, std::uint64_t stream_id,
                                     std::uint64_t index) noexcept;

}  // namespace gaussreg
