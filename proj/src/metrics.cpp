#include "z2amp/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "z2amp/error.hpp"
#include "z2amp/state_evolution.hpp"

namespace z2amp {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void require_record(const AmpTrajectory& trajectory, int t) {
  if (t < 1 || static_cast<std::size_t>(t) > trajectory.records.size())
    throw Error(ErrorCategory::InvalidArgument, "iteration " + std::to_string(t) + " not recorded");
}

}  // namespace

AlphaSeries alpha_oracle(const AmpTrajectory& trajectory, const SpikedModel& model) {
  AlphaSeries series;
  series.values.reserve(trajectory.records.size() + 1);
  series.values.push_back(0.0);
  if (!trajectory.denoised.empty()) {
    const auto& v = model.signal().entries;
    for (const auto& eta : trajectory.denoised) series.values.push_back(model.lambda() * dot(v, eta));
  } else {
    for (const auto& rec : trajectory.records) series.values.push_back(rec.alpha_oracle);
  }
  return series;
}

AlphaSeries alpha_plugin(const AmpTrajectory& trajectory) {
  AlphaSeries series;
  series.values.reserve(trajectory.records.size() + 1);
  series.values.push_back(0.0);
  for (const auto& rec : trajectory.records) series.values.push_back(rec.alpha_plugin);
  return series;
}

double crossing_threshold(double lambda) {
  if (!(lambda > 1.0))
    throw Error(ErrorCategory::InvalidArgument, "crossing time needs lambda > 1");
  return 0.5 * std::sqrt(lambda * lambda - 1.0);
}

std::optional<int> crossing_time(const AlphaSeries& alpha, double lambda) {
  const double threshold = crossing_threshold(lambda);
  for (std::size_t k = 0; k < alpha.values.size(); ++k)
    if (std::abs(alpha.values[k]) >= threshold) return static_cast<int>(k) + 1;
  return std::nullopt;
}

std::vector<double> estimator_u(const AmpTrajectory& trajectory, int t, double alpha) {
  require_record(trajectory, t);
  if (trajectory.iterates.size() < static_cast<std::size_t>(t))
    throw Error(ErrorCategory::InvalidArgument,
                "estimator needs stored iterates (enable store_iterates)");
  const auto& x = trajectory.iterates[static_cast<std::size_t>(t - 1)];
  const double pi = trajectory.records[static_cast<std::size_t>(t - 1)].pi;
  const double n = static_cast<double>(trajectory.n);
  const double scale = 1.0 / (trajectory.lambda * std::sqrt(n * (alpha * alpha + 1.0)));
  std::vector<double> u(x.size());
  std::transform(x.begin(), x.end(), u.begin(),
                 [&](double xi) { return scale * std::tanh(pi * xi); });
  return u;
}

RiskReport empirical_risk(std::span<const double> u, std::span<const double> v_star) {
  if (u.size() != v_star.size())
    throw Error(ErrorCategory::DimensionMismatch, "estimator and signal lengths differ");
  const double proj = dot(v_star, u);
  const double norm2 = dot(u, u);
  RiskReport report;
  report.overlap = proj * proj;
  report.u_norm4 = norm2 * norm2;
  report.empirical_risk = 1.0 - 2.0 * report.overlap + report.u_norm4;
  return report;
}

RiskReport risk_at(const AmpTrajectory& trajectory, const SpikedModel& model, int t,
                   AlphaSource source) {
  require_record(trajectory, t);
  double alpha = 0.0;
  if (source == AlphaSource::Plugin) {
    alpha = trajectory.records[static_cast<std::size_t>(t - 1)].pi /
            std::sqrt(static_cast<double>(trajectory.n));
  } else {
    alpha = alpha_oracle(trajectory, model).at(t);
  }
  const auto u = estimator_u(trajectory, t, alpha);
  RiskReport report = empirical_risk(u, model.signal().entries);
  report.t = t;
  report.predicted_risk = asymptotic_risk(trajectory.lambda);
  report.alpha_source = source;
  return report;
}

SeAgreement se_agreement(const AlphaSeries& alpha, double lambda, int t_end) {
  SeAgreement result;
  const auto crossing = crossing_time(alpha, lambda);
  if (!crossing) return result;

  result.crossed = true;
  result.crossing = *crossing;
  result.t_end = (t_end < 0) ? alpha.last_t() : std::min(t_end, alpha.last_t());
  if (result.t_end < result.crossing) {
    result.t_end = result.crossing - 1;
    return result;
  }

  const int steps = result.t_end - result.crossing;
  const SeTrace trace = se_recursion(lambda, std::abs(alpha.at(result.crossing)), steps);
  result.se_alpha = trace.alpha_star_seq;
  // Converged early: the recursion has reached its fixed point, hold it.
  result.se_alpha.resize(static_cast<std::size_t>(steps) + 1, result.se_alpha.back());

  for (int k = 0; k <= steps; ++k) {
    const double a = alpha.at(result.crossing + k);
    const double s = result.se_alpha[static_cast<std::size_t>(k)];
    const double ratio = (a * a) / (s * s);
    result.ratio.push_back(ratio);
    result.max_abs_log_ratio = std::max(result.max_abs_log_ratio, std::abs(std::log(ratio)));
  }
  return result;
}

std::vector<GaussianityStats> gaussianity_diagnostic(const AmpTrajectory& trajectory,
                                                     const SpikedModel& model) {
  if (trajectory.iterates.empty())
    throw Error(ErrorCategory::InvalidArgument,
                "gaussianity diagnostic needs stored iterates (enable store_iterates)");
  const auto alpha = alpha_oracle(trajectory, model);
  const auto& v = model.signal().entries;
  const std::size_t n = trajectory.n;
  const double root_n = std::sqrt(static_cast<double>(n));
  const double max_scale = std::sqrt(static_cast<double>(n) / std::log(static_cast<double>(std::max<std::size_t>(n, 2))));

  std::vector<GaussianityStats> stats;
  std::vector<double> r(n);
  for (std::size_t k = 0; k < trajectory.iterates.size(); ++k) {
    const int t = static_cast<int>(k) + 1;
    const auto& x = trajectory.iterates[k];
    GaussianityStats s;
    s.t = t;
    s.alpha = alpha.at(t);

    double mean = 0.0;
    double max_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = x[i] - s.alpha * v[i];
      mean += r[i];
      max_abs = std::max(max_abs, std::abs(r[i]));
    }
    s.residual_norm = std::sqrt(dot(r, r));
    s.scaled_max = max_abs * max_scale;

    mean /= static_cast<double>(n);
    double m2 = 0.0, m4 = 0.0;
    for (double ri : r) {
      const double z = root_n * (ri - mean);
      const double z2 = z * z;
      m2 += z2;
      m4 += z2 * z2;
    }
    m2 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    s.excess_kurtosis = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;
    stats.push_back(s);
  }
  return stats;
}

std::vector<double> orthonormality_diagnostic(std::span<const std::vector<double>> denoised,
                                              std::size_t window) {
  const std::size_t count = std::min(window, denoised.size());
  if (count == 0) return {};
  Eigen::MatrixXd gram(count, count);
  for (std::size_t a = 0; a < count; ++a)
    for (std::size_t b = 0; b <= a; ++b) {
      if (denoised[a].size() != denoised[b].size())
        throw Error(ErrorCategory::DimensionMismatch, "denoised iterates differ in length");
      gram(a, b) = gram(b, a) = dot(denoised[a], denoised[b]);
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace z2amp
