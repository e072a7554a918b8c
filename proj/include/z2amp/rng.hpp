#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace z2amp {

// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
// Stateless: every draw is a pure function of (key, counter), which is what
// lets the streamed matrix backend regenerate W_ij on demand.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key) noexcept;

// Independent streams under one 64-bit seed. The stream id occupies one
// counter word, so draws from different streams never collide.
enum class Stream : std::uint32_t {
  Noise = 1,
  Signal = 2,
  Init = 3,
  PowerStart = 4,
};

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  // Raw 128 random bits for index pair (a, b) in the given stream.
  PhiloxCounter bits(Stream stream, std::uint64_t a, std::uint64_t b = 0) const noexcept;

  // Uniform in the open interval (0, 1) with 53-bit resolution.
  double uniform(Stream stream, std::uint64_t a, std::uint64_t b = 0) const noexcept;

  // Two independent standard normals (Box-Muller cosine and sine branches)
  // from the two 64-bit halves of one block.
  std::pair<double, double> normal_pair(Stream stream, std::uint64_t a,
                                        std::uint64_t b = 0) const noexcept;

  // First member of normal_pair.
  double normal(Stream stream, std::uint64_t a, std::uint64_t b = 0) const noexcept;

  // +1 or -1 with equal probability.
  int sign(Stream stream, std::uint64_t a, std::uint64_t b = 0) const noexcept;

 private:
  PhiloxKey key_;
};

}  // namespace z2amp
