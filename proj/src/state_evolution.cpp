#include "z2amp/state_evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "z2amp/error.hpp"
#include "z2amp/quadrature.hpp"

namespace z2amp {

namespace {

double saturating_tanh(double z) {
  if (z > 20.0) return 1.0;
  if (z < -20.0) return -1.0;
  return std::tanh(z);
}

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) throw Error(ErrorCategory::InvalidArgument, std::string(what) + " must be finite");
}

}  // namespace

double h(double tau) {
  require_finite(tau, "tau");
  if (tau < 0.0) throw Error(ErrorCategory::InvalidArgument, "h(tau) requires tau >= 0");
  if (tau == 0.0) return 0.0;
  const double s = std::sqrt(tau);
  return default_gauss_hermite().expect([&](double g) { return saturating_tanh(tau + s * g); });
}

double h_squared(double tau) {
  require_finite(tau, "tau");
  if (tau < 0.0) throw Error(ErrorCategory::InvalidArgument, "tau must be >= 0");
  const double s = std::sqrt(tau);
  return default_gauss_hermite().expect([&](double g) {
    const double t = saturating_tanh(tau + s * g);
    return t * t;
  });
}

double h_prime(double tau) {
  require_finite(tau, "tau");
  if (!(tau > 0.0)) throw Error(ErrorCategory::InvalidArgument, "h'(tau) requires tau > 0");
  const double s = std::sqrt(tau);
  return default_gauss_hermite().expect([&](double g) {
    const double t = saturating_tanh(tau + s * g);
    return (1.0 + g / (2.0 * s)) * (1.0 - t * t);
  });
}

SeTrace se_recursion(double lambda, double alpha_start, int t_max, bool stop_early) {
  require_finite(lambda, "lambda");
  require_finite(alpha_start, "alpha_start");
  if (!(lambda > 0.0)) throw Error(ErrorCategory::InvalidArgument, "lambda must be > 0");
  if (alpha_start < 0.0) throw Error(ErrorCategory::InvalidArgument, "alpha_start must be >= 0");

  SeTrace trace;
  trace.lambda = lambda;
  trace.start_value = alpha_start;
  trace.alpha_star = fixed_point(lambda);
  trace.alpha_star_seq.push_back(alpha_start);
  double alpha = alpha_start;
  for (int t = 0; t < t_max; ++t) {
    const double next = lambda * std::sqrt(h(alpha * alpha));
    trace.alpha_star_seq.push_back(next);
    const bool settled = std::abs(next - alpha) < kSeStopTolerance;
    alpha = next;
    if (stop_early && settled) break;
  }
  return trace;
}

FixedPoint solve_fixed_point(double lambda) {
  require_finite(lambda, "lambda");
  if (!(lambda > 0.0)) throw Error(ErrorCategory::InvalidArgument, "lambda must be > 0");
  if (lambda <= 1.0) return {};
  if (lambda - 1.0 < kTransitionResolution) return {0.0, true};

  const double lambda2 = lambda * lambda;
  const auto gap = [&](double tau) { return lambda2 * h(tau) - tau; };

  double lo = kFixedPointFloor;
  double hi = lambda2;
  if (!(gap(lo) > 0.0)) return {0.0, true};
  while (hi - lo > kFixedPointWidth) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) > 0.0 ? lo : hi) = mid;
  }
  return {std::sqrt(0.5 * (lo + hi)), false};
}

double fixed_point(double lambda) { return solve_fixed_point(lambda).alpha; }

double asymptotic_risk(double lambda) {
  const double alpha = fixed_point(lambda);
  const double ratio = alpha / lambda;
  return std::clamp(1.0 - ratio * ratio * ratio * ratio, 0.0, 1.0);
}

}  // namespace z2amp
