#include <cmath>
#include <numeric>

#include "doctest.h"
#include "z2amp/error.hpp"
#include "z2amp/model.hpp"

using namespace z2amp;

namespace {

ModelParams params(std::size_t n, double lambda, std::uint64_t seed, Backend backend) {
  return {n, lambda, seed, backend, NoiseKind::Gaussian};
}

std::vector<double> test_vector(std::size_t n) {
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = std::sin(0.37 * static_cast<double>(i) + 0.1);
  return y;
}

}  // namespace

TEST_CASE("signal has entries +-1/sqrt(n) and unit norm") {
  const auto v = sample_signal(1001, 5);
  const double scale = 1.0 / std::sqrt(1001.0);
  double norm2 = 0.0;
  for (double e : v.entries) {
    CHECK(std::abs(std::abs(e) - scale) < 1e-15);
    norm2 += e * e;
  }
  CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sample_signal(1001, 5).entries == v.entries);
  CHECK(sample_signal(1001, 6).entries != v.entries);
}

TEST_CASE("observation is symmetric and splits into spike plus noise") {
  const auto model = SpikedModel::build(params(40, 1.3, 11, Backend::Streamed));
  const auto& v = model.signal().entries;
  for (std::size_t i = 0; i < 40; ++i)
    for (std::size_t j = 0; j < 40; ++j) {
      CHECK(model.entry(i, j) == model.entry(j, i));
      CHECK(model.entry(i, j) ==
            doctest::Approx(1.3 * v[i] * v[j] + model.noise_entry(i, j)).epsilon(1e-14));
    }
}

TEST_CASE("noise entries have variance 1/n off the diagonal and 2/n on it") {
  const std::size_t n = 600;
  const auto model = SpikedModel::build(params(n, 1.0, 3, Backend::Streamed));
  double off = 0.0, diag = 0.0, off_mean = 0.0;
  std::size_t off_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    diag += model.noise_entry(i, i) * model.noise_entry(i, i);
    for (std::size_t j = 0; j < i; ++j) {
      const double w = model.noise_entry(i, j);
      off += w * w;
      off_mean += w;
      ++off_count;
    }
  }
  CHECK(off / off_count * n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(off_mean / off_count) * n < 0.2);
  CHECK(diag == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("matvec matches the naive entrywise product") {
  for (std::size_t n : {1u, 2u, 127u, 128u, 129u, 300u}) {
    const auto model = SpikedModel::build(params(n, 1.2, 17, Backend::Dense));
    const auto y = test_vector(n);
    const auto out = model.matvec(y);
    for (std::size_t i = 0; i < n; ++i) {
      double ref = 0.0;
      for (std::size_t j = 0; j < n; ++j) ref += model.entry(i, j) * y[j];
      CHECK(out[i] == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("dense and streamed backends agree bit for bit at any worker count") {
  const std::size_t n = 517;
  const auto dense = SpikedModel::build(params(n, 1.2, 23, Backend::Dense));
  const auto streamed = SpikedModel::build(params(n, 1.2, 23, Backend::Streamed));
  const auto y = test_vector(n);
  const auto ref = dense.matvec(y, 1);
  CHECK(streamed.matvec(y, 1) == ref);
  CHECK(dense.matvec(y, 3) == ref);
  CHECK(streamed.matvec(y, 4) == ref);
  CHECK(dense.noise_entry(400, 3) == streamed.noise_entry(400, 3));
}

TEST_CASE("matvec may run in place") {
  const auto model = SpikedModel::build(params(200, 1.1, 2, Backend::Streamed));
  auto y = test_vector(200);
  const auto ref = model.matvec(y);
  model.matvec(y, y);
  CHECK(y == ref);
}

TEST_CASE("zero-noise hook leaves the pure spike") {
  ModelParams p = params(64, 1.5, 8, Backend::Dense);
  p.noise = NoiseKind::Zero;
  const auto model = SpikedModel::build(p);
  const auto& v = model.signal().entries;
  const auto out = model.matvec(v);
  for (std::size_t i = 0; i < 64; ++i) CHECK(out[i] == doctest::Approx(1.5 * v[i]).epsilon(1e-13));
}

TEST_CASE("supplied signal keeps the noise draw") {
  const auto base = SpikedModel::build(params(50, 1.2, 4, Backend::Streamed));
  SignalVector flipped = base.signal();
  for (double& e : flipped.entries) e = -e;
  const auto other = SpikedModel::build_with_signal(base.params(), flipped);
  CHECK(other.noise_entry(10, 3) == base.noise_entry(10, 3));
  CHECK(other.entry(10, 3) == base.entry(10, 3));  // spike is even in v
  SignalVector wrong;
  wrong.entries.assign(49, 1.0 / 7.0);
  CHECK_THROWS_AS(SpikedModel::build_with_signal(base.params(), wrong), Error);
}

TEST_CASE("argument errors carry categories") {
  const auto category_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.category();
    }
    return ErrorCategory::Internal;
  };
  CHECK(category_of([] { SpikedModel::build(params(0, 1.2, 1, Backend::Dense)); }) ==
        ErrorCategory::InvalidArgument);
  CHECK(category_of([] { SpikedModel::build(params(10, -1.0, 1, Backend::Dense)); }) ==
        ErrorCategory::InvalidArgument);
  CHECK(category_of([] { SpikedModel::build(params(10, NAN, 1, Backend::Dense)); }) ==
        ErrorCategory::InvalidArgument);
  const auto model = SpikedModel::build(params(10, 1.2, 1, Backend::Dense));
  std::vector<double> y(9), out(10);
  CHECK(category_of([&] { model.matvec(y, out); }) == ErrorCategory::DimensionMismatch);
}

TEST_CASE("dense allocation above the byte limit suggests the streamed backend") {
  try {
    SpikedModel::build(params(2000, 1.2, 1, Backend::Dense), 1 << 20);
    FAIL("expected OutOfMemory");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::OutOfMemory);
    CHECK(std::string(e.what()).find("streamed") != std::string::npos);
  }
  CHECK_NOTHROW(SpikedModel::build(params(2000, 1.2, 1, Backend::Streamed), 1 << 20));
}
