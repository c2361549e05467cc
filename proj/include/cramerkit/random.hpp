#pragma once

#include <array>
#include <cstdint>

namespace cramer {

/// Philox4x32-10 block function (Salmon et al., SC'11). Pure: the output
/// depends only on (counter, key).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Uniform stream for one (seed, sample, component) triple.
///
/// The key is the seed; the counter holds the sample index (64 bits), the
/// component index (32 bits) and a draw-block counter. Streams for distinct
/// triples never share a counter value, so the k-th sample is the same
/// regardless of how samples are split across threads.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t sample_index, std::uint32_t component_index) noexcept;

  std::uint64_t next_u64() noexcept;

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept;

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;  // words of block_ consumed
};

}  // namespace cramer
