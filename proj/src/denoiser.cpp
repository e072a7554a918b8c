#include "z2amp/denoiser.hpp"

#include <algorithm>
#include <cmath>

#include "z2amp/error.hpp"

namespace z2amp {

namespace {

inline double clamped_tanh(double z) {
  if (z > kTanhSaturation) return 1.0;
  if (z < -kTanhSaturation) return -1.0;
  return std::tanh(z);
}

inline double sech2(double z) {
  if (std::abs(z) > kTanhSaturation) return 0.0;
  const double t = std::tanh(z);
  return 1.0 - t * t;
}

}  // namespace

DenoiserParams compute_params(std::span<const double> x) {
  if (x.empty()) throw Error(ErrorCategory::DimensionMismatch, "denoiser input is empty");
  const double n = static_cast<double>(x.size());

  double norm2 = 0.0;
  for (double v : x) norm2 += v * v;

  DenoiserParams params;
  params.pi = std::sqrt(std::max(n * (norm2 - 1.0), 1.0));

  double tanh_norm2 = 0.0;
  double sech2_sum = 0.0;
  for (double v : x) {
    const double z = params.pi * v;
    const double t = clamped_tanh(z);
    tanh_norm2 += t * t;
    sech2_sum += sech2(z);
  }
  if (!(tanh_norm2 > 0.0))
    throw Error(ErrorCategory::DegenerateInput, "denoiser input is zero; gamma is undefined");

  params.gamma = 1.0 / std::sqrt(tanh_norm2);
  params.mean_derivative = params.gamma * params.pi * sech2_sum / n;
  return params;
}

std::vector<double> apply_denoiser(const DenoiserParams& params, std::span<const double> x) {
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(),
                 [&](double v) { return params.gamma * clamped_tanh(params.pi * v); });
  return out;
}

std::vector<double> apply_denoiser_derivative(const DenoiserParams& params, std::span<const double> x) {
  std::vector<double> out(x.size());
  const double scale = params.gamma * params.pi;
  std::transform(x.begin(), x.end(), out.begin(),
                 [&](double v) { return scale * sech2(params.pi * v); });
  return out;
}

}  // namespace z2amp
