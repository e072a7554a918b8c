#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "z2amp/rng.hpp"

namespace z2amp {

// Ground truth v* with entries +-1/sqrt(n).
struct SignalVector {
  std::vector<double> entries;

  std::size_t n() const noexcept { return entries.size(); }
};

SignalVector sample_signal(std::size_t n, std::uint64_t seed);

enum class Backend { Dense, Streamed };

// Test hook: Zero replaces W by the zero matrix.
enum class NoiseKind { Gaussian, Zero };

struct ModelParams {
  std::size_t n = 0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  Backend backend = Backend::Streamed;
  NoiseKind noise = NoiseKind::Gaussian;
};

// Dense allocations above this many bytes are refused with OutOfMemory.
inline constexpr std::size_t kDefaultDenseByteLimit = std::size_t{8} << 30;

// Observation M = lambda v* v*^T + W. W_ij ~ N(0, 1/n) off the diagonal,
// W_ii ~ N(0, 2/n). Both backends draw W_ij from the same counter-based
// generator keyed on (seed, max(i,j), min(i,j)), so they hold the same matrix;
// the spike is applied as a rank-one correction in every matvec.
// Immutable after construction and safe to share between threads.
class SpikedModel {
 public:
  static SpikedModel build(const ModelParams& params,
                           std::size_t dense_byte_limit = kDefaultDenseByteLimit);

  // Same noise draw, caller-supplied signal (used for sign-symmetry checks).
  static SpikedModel build_with_signal(const ModelParams& params, SignalVector signal,
                                       std::size_t dense_byte_limit = kDefaultDenseByteLimit);

  std::size_t n() const noexcept { return params_.n; }
  double lambda() const noexcept { return params_.lambda; }
  std::uint64_t seed() const noexcept { return params_.seed; }
  Backend backend() const noexcept { return params_.backend; }
  const ModelParams& params() const noexcept { return params_; }
  const SignalVector& signal() const noexcept { return signal_; }

  double noise_entry(std::size_t i, std::size_t j) const;
  double entry(std::size_t i, std::size_t j) const;

  // out = M y, evaluated over kTile x kTile blocks of the lower triangle; each
  // block is produced once and used for both itself and its mirror. `out` may
  // alias `y`. Results are bit-identical across backends and worker counts.
  void matvec(std::span<const double> y, std::span<double> out, unsigned workers = 1) const;
  std::vector<double> matvec(std::span<const double> y, unsigned workers = 1) const;

 private:
  SpikedModel(ModelParams params, SignalVector signal);

  static constexpr std::size_t kTile = 128;

  double generate_noise(std::size_t i, std::size_t j) const;
  // Block W[i0:i1, j0:j1] (j0 <= i0) into a row-major buffer of width j1 - j0.
  void fill_tile(std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1,
                 double* tile) const;
  void tile_row_partials(std::span<const double> y, std::size_t tile_row,
                         std::span<double> partials, std::vector<double>& tile) const;

  ModelParams params_;
  SignalVector signal_;
  CounterRng rng_;
  double inv_sqrt_n_ = 0.0;
  std::vector<double> packed_;  // Dense only: lower triangle of W, row-major
};

}  // namespace z2amp
