#include "z2amp/rng.hpp"

#include <cmath>
#include <numbers>

#include "z2amp/error.hpp"

namespace z2amp {

std::string_view category_name(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::InvalidArgument: return "invalid_argument";
    case ErrorCategory::DimensionMismatch: return "dimension_mismatch";
    case ErrorCategory::DegenerateInput: return "degenerate_input";
    case ErrorCategory::OutOfMemory: return "out_of_memory";
    case ErrorCategory::Io: return "io_error";
    case ErrorCategory::NoCrossing: return "no_crossing";
    case ErrorCategory::Internal: return "internal";
  }
  return "internal";
}

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t word = (static_cast<std::uint64_t>(hi) << 32) | lo;
  // (k + 0.5) / 2^53 never hits 0 or 1.
  return (static_cast<double>(word >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) noexcept {
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

PhiloxCounter CounterRng::bits(Stream stream, std::uint64_t a, std::uint64_t b) const noexcept {
  // Indices above 2^32 fold their high halves into the fourth word.
  const std::uint32_t high = static_cast<std::uint32_t>(a >> 32) * 0x85EBCA6Bu ^
                             static_cast<std::uint32_t>(b >> 32);
  const PhiloxCounter counter{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                              static_cast<std::uint32_t>(stream), high};
  return philox4x32(counter, key_);
}

double CounterRng::uniform(Stream stream, std::uint64_t a, std::uint64_t b) const noexcept {
  const auto block = bits(stream, a, b);
  return to_open_unit(block[0], block[1]);
}

std::pair<double, double> CounterRng::normal_pair(Stream stream, std::uint64_t a,
                                                  std::uint64_t b) const noexcept {
  const auto block = bits(stream, a, b);
  const double u1 = to_open_unit(block[0], block[1]);
  const double u2 = to_open_unit(block[2], block[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

double CounterRng::normal(Stream stream, std::uint64_t a, std::uint64_t b) const noexcept {
  return normal_pair(stream, a, b).first;
}

int CounterRng::sign(Stream stream, std::uint64_t a, std::uint64_t b) const noexcept {
  return (bits(stream, a, b)[0] & 1u) ? 1 : -1;
}

}  // namespace z2amp
