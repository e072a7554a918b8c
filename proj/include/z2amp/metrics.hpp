#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "z2amp/amp_engine.hpp"
#include "z2amp/model.hpp"

namespace z2amp {

// Signal strengths indexed by AMP iteration: values[k] holds alpha_{k+1}.
// alpha_1 is 0 by the eta_0 == 0 convention; alpha_{t+1} comes from record t.
struct AlphaSeries {
  std::vector<double> values;

  double at(int t) const { return values.at(static_cast<std::size_t>(t - 1)); }
  int last_t() const noexcept { return static_cast<int>(values.size()); }
};

// alpha_{t+1} = lambda v*^T eta_t(x_t). Recomputed from stored denoised
// iterates when present, otherwise read from the records.
AlphaSeries alpha_oracle(const AmpTrajectory& trajectory, const SpikedModel& model);

// Oracle-free |alpha_{t+1}| ~ pi_{t+1} / sqrt(n), with propagated orientation.
AlphaSeries alpha_plugin(const AmpTrajectory& trajectory);

double crossing_threshold(double lambda);

// First t with |alpha_t| >= sqrt(lambda^2 - 1) / 2; nullopt if never reached.
// Throws InvalidArgument for lambda <= 1.
std::optional<int> crossing_time(const AlphaSeries& alpha, double lambda);

enum class AlphaSource { Oracle, Plugin };

struct RiskReport {
  int t = 0;
  double empirical_risk = 0.0;  // ||v* v*^T - u u^T||_F^2
  double predicted_risk = 0.0;  // 1 - alpha*^4 / lambda^4
  double overlap = 0.0;         // (v*^T u)^2
  double u_norm4 = 0.0;         // ||u||_2^4
  AlphaSource alpha_source = AlphaSource::Plugin;
};

// u_t = tanh(pi_t x_t) / (lambda sqrt(n (alpha^2 + 1))) for record t.
// Needs stored iterates; throws InvalidArgument otherwise.
std::vector<double> estimator_u(const AmpTrajectory& trajectory, int t, double alpha);

// Rank-one expansion 1 - 2 (v^T u)^2 + ||u||^4 for unit-norm v; never forms
// an n x n matrix. Only the risk fields are filled.
RiskReport empirical_risk(std::span<const double> u, std::span<const double> v_star);

// Convenience: estimator at t with the chosen alpha, scored against v*, with
// the asymptotic prediction attached.
RiskReport risk_at(const AmpTrajectory& trajectory, const SpikedModel& model, int t,
                   AlphaSource source = AlphaSource::Plugin);

struct SeAgreement {
  bool crossed = false;
  int crossing = 0;  // measured crossing time
  int t_end = 0;
  // Entries k = 0.. correspond to t = crossing + k.
  std::vector<double> se_alpha;
  std::vector<double> ratio;  // alpha_t^2 / alpha*_t^2
  double max_abs_log_ratio = 0.0;
};

// Seeds the state evolution at alpha*_crossing = |alpha_crossing| and compares
// through t_end (inclusive; clipped to the series). A series that never
// crosses yields crossed == false and empty vectors.
SeAgreement se_agreement(const AlphaSeries& alpha, double lambda, int t_end = -1);

struct GaussianityStats {
  int t = 0;
  double alpha = 0.0;
  double residual_norm = 0.0;    // ||x_t - alpha_t v*||_2
  double excess_kurtosis = 0.0;  // of sqrt(n) (x_t - alpha_t v*)
  double scaled_max = 0.0;       // max_i |r_i| sqrt(n / log n)
};

// Needs stored iterates; the oracle alpha_t is used for the signal part.
std::vector<GaussianityStats> gaussianity_diagnostic(const AmpTrajectory& trajectory,
                                                     const SpikedModel& model);

inline constexpr std::size_t kOrthonormalityWindow = 15;

// Ascending eigenvalues of the Gram matrix of the first min(window, count)
// denoised iterates.
std::vector<double> orthonormality_diagnostic(std::span<const std::vector<double>> denoised,
                                              std::size_t window = kOrthonormalityWindow);

}  // namespace z2amp
