#include "z2amp/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <new>
#include <numbers>
#include <string>
#include <thread>

#include "z2amp/error.hpp"

namespace z2amp {

namespace {

inline std::size_t tri(std::size_t i) { return i * (i + 1) / 2; }

}  // namespace

SignalVector sample_signal(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCategory::InvalidArgument, "signal dimension must be >= 1");
  const CounterRng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  SignalVector v;
  v.entries.resize(n);
  for (std::size_t i = 0; i < n; ++i) v.entries[i] = rng.sign(Stream::Signal, i) * scale;
  return v;
}

SpikedModel::SpikedModel(ModelParams params, SignalVector signal)
    : params_(params),
      signal_(std::move(signal)),
      rng_(params.seed),
      inv_sqrt_n_(1.0 / std::sqrt(static_cast<double>(params.n))) {}

SpikedModel SpikedModel::build(const ModelParams& params, std::size_t dense_byte_limit) {
  if (params.n == 0) throw Error(ErrorCategory::InvalidArgument, "model dimension must be >= 1");
  return build_with_signal(params, sample_signal(params.n, params.seed), dense_byte_limit);
}

SpikedModel SpikedModel::build_with_signal(const ModelParams& params, SignalVector signal,
                                           std::size_t dense_byte_limit) {
  if (params.n == 0) throw Error(ErrorCategory::InvalidArgument, "model dimension must be >= 1");
  if (!(params.lambda >= 0.0) || !std::isfinite(params.lambda))
    throw Error(ErrorCategory::InvalidArgument, "lambda must be finite and non-negative");
  if (signal.n() != params.n)
    throw Error(ErrorCategory::DimensionMismatch, "signal length does not match model dimension");

  SpikedModel model(params, std::move(signal));
  if (params.backend != Backend::Dense) return model;

  const std::size_t n = params.n;
  const bool overflow = n > std::numeric_limits<std::size_t>::max() / (n + 1) / sizeof(double);
  const std::size_t bytes = overflow ? std::numeric_limits<std::size_t>::max()
                                     : tri(n) * sizeof(double);
  if (overflow || bytes > dense_byte_limit) {
    throw Error(ErrorCategory::OutOfMemory,
                "dense backend needs " + std::to_string(bytes) + " bytes for n=" +
                    std::to_string(n) + "; use the streamed backend");
  }
  try {
    model.packed_.resize(tri(n));
  } catch (const std::bad_alloc&) {
    throw Error(ErrorCategory::OutOfMemory,
                "dense allocation failed for n=" + std::to_string(n) + "; use the streamed backend");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) model.packed_[tri(i) + j] = model.generate_noise(i, j);
  return model;
}

double SpikedModel::generate_noise(std::size_t i, std::size_t j) const {
  if (params_.noise == NoiseKind::Zero) return 0.0;
  const std::size_t hi = std::max(i, j);
  const std::size_t lo = std::min(i, j);
  // Columns 2k and 2k+1 of a row share one Philox block.
  const auto pair = rng_.normal_pair(Stream::Noise, hi, lo >> 1);
  const double z = (lo & 1) ? pair.second : pair.first;
  return (hi == lo ? std::numbers::sqrt2 * z : z) * inv_sqrt_n_;
}

double SpikedModel::noise_entry(std::size_t i, std::size_t j) const {
  if (i >= n() || j >= n()) throw Error(ErrorCategory::DimensionMismatch, "entry index out of range");
  if (!packed_.empty()) return i >= j ? packed_[tri(i) + j] : packed_[tri(j) + i];
  return generate_noise(i, j);
}

double SpikedModel::entry(std::size_t i, std::size_t j) const {
  return noise_entry(i, j) + params_.lambda * signal_.entries[i] * signal_.entries[j];
}

void SpikedModel::fill_tile(std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1,
                            double* tile) const {
  const std::size_t width = j1 - j0;
  const bool diagonal = (i0 == j0);
  for (std::size_t i = i0; i < i1; ++i) {
    double* row = tile + (i - i0) * width;
    const std::size_t jmax = diagonal ? i + 1 : j1;
    if (!packed_.empty()) {
      std::copy(packed_.begin() + static_cast<std::ptrdiff_t>(tri(i) + j0),
                packed_.begin() + static_cast<std::ptrdiff_t>(tri(i) + jmax), row);
    } else if (params_.noise == NoiseKind::Zero) {
      std::fill(row, row + (jmax - j0), 0.0);
    } else {
      for (std::size_t j = j0; j < jmax; j += 2) {
        const auto pair = rng_.normal_pair(Stream::Noise, i, j >> 1);
        row[j - j0] = pair.first * inv_sqrt_n_;
        if (j + 1 < jmax) row[j + 1 - j0] = pair.second * inv_sqrt_n_;
      }
      if (diagonal) row[i - j0] = generate_noise(i, i);
    }
    if (diagonal)
      for (std::size_t j = j0; j < i; ++j) tile[(j - j0) * width + (i - i0)] = row[j - j0];
  }
}

void SpikedModel::tile_row_partials(std::span<const double> y, std::size_t tile_row,
                                    std::span<double> partials, std::vector<double>& tile) const {
  const std::size_t n = params_.n;
  const std::size_t tiles = (n + kTile - 1) / kTile;
  const std::size_t i0 = tile_row * kTile;
  const std::size_t i1 = std::min(n, i0 + kTile);

  for (std::size_t tile_col = 0; tile_col <= tile_row; ++tile_col) {
    const std::size_t j0 = tile_col * kTile;
    const std::size_t j1 = std::min(n, j0 + kTile);
    const std::size_t width = j1 - j0;
    fill_tile(i0, i1, j0, j1, tile.data());

    // Rows of the block: ascending columns j0..j1.
    for (std::size_t i = i0; i < i1; ++i) {
      const double* row = tile.data() + (i - i0) * width;
      double acc = 0.0;
      for (std::size_t j = 0; j < width; ++j) acc += row[j] * y[j0 + j];
      partials[i * tiles + tile_col] = acc;
    }
    if (tile_col == tile_row) continue;

    // Mirror block W[j0:j1, i0:i1] = tile^T: ascending rows i0..i1.
    double column_acc[kTile] = {};
    for (std::size_t i = i0; i < i1; ++i) {
      const double* row = tile.data() + (i - i0) * width;
      const double yi = y[i];
      for (std::size_t j = 0; j < width; ++j) column_acc[j] += row[j] * yi;
    }
    for (std::size_t j = 0; j < width; ++j) partials[(j0 + j) * tiles + tile_row] = column_acc[j];
  }
}

void SpikedModel::matvec(std::span<const double> y, std::span<double> out,
                         unsigned workers) const {
  const std::size_t n = params_.n;
  if (y.size() != n || out.size() != n)
    throw Error(ErrorCategory::DimensionMismatch,
                "matvec expects vectors of length " + std::to_string(n));

  // Every (row, column tile) partial sum is written by exactly one tile pair,
  // and rows reduce their partials in ascending tile order, so the result is
  // independent of the worker count and identical for both backends.
  const std::size_t tiles = (n + kTile - 1) / kTile;
  std::vector<double> partials(n * tiles);
  const auto work = [&](std::size_t first, std::size_t stride) {
    std::vector<double> tile(kTile * kTile);
    for (std::size_t r = first; r < tiles; r += stride) tile_row_partials(y, r, partials, tile);
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(tiles)));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }

  double projection = 0.0;
  for (std::size_t j = 0; j < n; ++j) projection += signal_.entries[j] * y[j];
  const double spike = params_.lambda * projection;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < tiles; ++c) acc += partials[i * tiles + c];
    out[i] = acc + spike * signal_.entries[i];
  }
}

std::vector<double> SpikedModel::matvec(std::span<const double> y, unsigned workers) const {
  std::vector<double> out(params_.n);
  matvec(y, out, workers);
  return out;
}

}  // namespace z2amp
