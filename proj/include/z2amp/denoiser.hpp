#pragma once

#include <span>
#include <vector>

namespace z2amp {

// Parameters of eta_t(x) = gamma * tanh(pi * x) for one iterate x_t.
//   pi    = sqrt(max(n (||x_t||^2 - 1), 1))
//   gamma = 1 / ||tanh(pi x_t)||_2, so that ||eta_t(x_t)||_2 = 1
//   mean_derivative = <eta_t'(x_t)>, the coordinate mean of the derivative
struct DenoiserParams {
  double pi = 1.0;
  double gamma = 1.0;
  double mean_derivative = 0.0;
};

// |pi x| above this saturates: tanh is taken as +-1 and its derivative as 0.
inline constexpr double kTanhSaturation = 20.0;

// Throws DegenerateInput when tanh(pi x) vanishes (x == 0).
DenoiserParams compute_params(std::span<const double> x);

std::vector<double> apply_denoiser(const DenoiserParams& params, std::span<const double> x);

// gamma * pi * (1 - tanh^2(pi x)) entrywise.
std::vector<double> apply_denoiser_derivative(const DenoiserParams& params, std::span<const double> x);

}  // namespace z2amp
