#include <cmath>
#include <numeric>

#include "doctest.h"
#include "z2amp/denoiser.hpp"
#include "z2amp/error.hpp"

using namespace z2amp;

namespace {

std::vector<double> iterate(std::size_t n, double alpha) {
  std::vector<double> x(n);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    x[i] = alpha * (i % 3 == 0 ? -s : s) + s * std::cos(1.7 * static_cast<double>(i));
  return x;
}

double norm(const std::vector<double>& v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

}  // namespace

TEST_CASE("denoised iterate has unit norm") {
  for (double alpha : {0.0, 0.3, 1.0, 3.0}) {
    const auto x = iterate(500, alpha);
    const auto p = compute_params(x);
    CHECK(std::abs(norm(apply_denoiser(p, x)) - 1.0) < 1e-12);
  }
}

TEST_CASE("pi follows sqrt(max(n(||x||^2 - 1), 1))") {
  const auto x = iterate(400, 1.2);
  const double sq = std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
  CHECK(compute_params(x).pi == doctest::Approx(std::sqrt(400.0 * (sq - 1.0))));

  // ||x||^2 <= 1 + 1/n clamps to 1.
  std::vector<double> small(100, 0.05);
  CHECK(compute_params(small).pi == 1.0);
}

TEST_CASE("derivative matches central finite differences") {
  const auto x = iterate(64, 0.8);
  const auto p = compute_params(x);
  const auto d = apply_denoiser_derivative(p, x);
  const double step = 1e-6;
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto xp = x, xm = x;
    xp[i] += step;
    xm[i] -= step;
    const double fd = (apply_denoiser(p, xp)[i] - apply_denoiser(p, xm)[i]) / (2 * step);
    CHECK(std::abs(fd - d[i]) < 1e-5);
  }
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
  CHECK(p.mean_derivative == doctest::Approx(mean).epsilon(1e-13));
}

TEST_CASE("saturated entries stay finite") {
  std::vector<double> x(50, 0.0);
  x[0] = 1e6;
  x[1] = -1e6;
  x[2] = 1e-3;
  const auto p = compute_params(x);
  const auto eta = apply_denoiser(p, x);
  const auto d = apply_denoiser_derivative(p, x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(std::isfinite(eta[i]));
    CHECK(std::isfinite(d[i]));
  }
  CHECK(d[0] == 0.0);
  CHECK(eta[0] == doctest::Approx(-eta[1]));
  CHECK(std::abs(norm(eta) - 1.0) < 1e-12);
}

TEST_CASE("zero iterate is degenerate") {
  std::vector<double> x(20, 0.0);
  try {
    compute_params(x);
    FAIL("expected DegenerateInput");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::DegenerateInput);
  }
}

TEST_CASE("denoiser is odd") {
  const auto x = iterate(80, 0.5);
  std::vector<double> neg(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
  const auto a = apply_denoiser(compute_params(x), x);
  const auto b = apply_denoiser(compute_params(neg), neg);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(a[i] == -b[i]);
}
