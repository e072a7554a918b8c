#pragma once

#include <vector>

namespace z2amp {

// h(tau) = E[tanh(tau + sqrt(tau) G)], G ~ N(0, 1). Requires tau >= 0.
double h(double tau);

// h'(tau) = E[(1 + G / (2 sqrt(tau))) (1 - tanh^2(tau + sqrt(tau) G))].
// Requires tau > 0.
double h_prime(double tau);

// E[tanh^2(tau + sqrt(tau) G)]. Equal to h(tau) under the Nishimori identity;
// exposed so callers can check that identity.
double h_squared(double tau);

struct SeTrace {
  double lambda = 0.0;
  double start_value = 0.0;
  std::vector<double> alpha_star_seq;  // alpha*_{s}, alpha*_{s+1}, ...
  double alpha_star = 0.0;             // fixed point for lambda
};

inline constexpr double kSeStopTolerance = 1e-13;

// alpha*_{t+1} = lambda sqrt(h(alpha*_t^2)) from alpha_start, at most t_max
// steps after the start value. Stops once successive values differ by less
// than kSeStopTolerance unless `stop_early` is false.
SeTrace se_recursion(double lambda, double alpha_start, int t_max, bool stop_early = true);

struct FixedPoint {
  double alpha = 0.0;
  // lambda > 1 but the positive root lies below the bisection floor.
  bool sub_resolution = false;
};

inline constexpr double kFixedPointFloor = 1e-8;
inline constexpr double kFixedPointWidth = 1e-12;
// lambda within this distance above 1 is reported as a sub-resolution root.
inline constexpr double kTransitionResolution = 1e-6;

// Positive solution of alpha^2 = lambda^2 h(alpha^2) by bisection on
// lambda^2 h(tau) - tau over (kFixedPointFloor, lambda^2]. Zero when lambda <= 1.
FixedPoint solve_fixed_point(double lambda);
double fixed_point(double lambda);

// 1 - alpha*^4 / lambda^4 clamped to [0, 1].
double asymptotic_risk(double lambda);

}  // namespace z2amp
