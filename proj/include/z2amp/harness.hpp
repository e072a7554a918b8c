#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "z2amp/amp_engine.hpp"
#include "z2amp/config.hpp"
#include "z2amp/metrics.hpp"

namespace z2amp {

// One CSV row: record t of run `run` under `init`.
// se_alpha is the state-evolution prediction for the same index as
// alpha_oracle (alpha*_{t+1}); absent before the crossing time.
struct TrajectoryRow {
  InitKind init = InitKind::Random;
  int run = 0;
  AmpRecord record;
  std::optional<double> se_alpha;
  std::optional<double> empirical_risk;
};

struct RunSummary {
  InitKind init = InitKind::Random;
  int run = 0;
  std::uint64_t model_seed = 0;
  std::optional<int> crossing;
  double plateau_correlation = 0.0;  // mean correlation over the last tenth of the run
  std::optional<double> se_max_abs_log_ratio;
  std::optional<RiskReport> risk;
};

// Per-t mean and sample (n-1) standard deviation of the correlation across
// runs. The plotted band is mean +- band_half_width().
struct AggregateCurve {
  InitKind init = InitKind::Random;
  std::vector<double> mean_corr;
  std::vector<double> sd_corr;

  double band_half_width(std::size_t k) const { return 2.0 * sd_corr.at(k); }
};

struct ExperimentResult {
  ExperimentConfig config;
  double alpha_star = 0.0;
  double predicted_risk = 0.0;
  std::vector<TrajectoryRow> rows;  // ordered by (init, run, t)
  std::vector<AggregateCurve> curves;
  std::vector<RunSummary> runs;  // ordered by (init, run)
};

// Model seed for run r is base_seed + r; the same seed keys the init streams,
// which are disjoint from the noise and signal streams. Every init kind in
// the config sees the same model draw for a given run index.
std::uint64_t run_seed(const ExperimentConfig& config, int run);

// Runs are distributed over config.workers threads; output does not depend
// on the worker count. Dense allocations that cannot be satisfied surface as
// OutOfMemory with a pointer to the streamed backend.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Recomputes curves from rows in row order (used by emit round-trips too).
std::vector<AggregateCurve> aggregate(const std::vector<TrajectoryRow>& rows,
                                      const std::vector<InitKind>& inits, int t_max);

struct SweepRow {
  std::size_t n = 0;
  double lambda = 0.0;
  InitKind init = InitKind::Random;
  int runs = 0;
  int crossed = 0;
  std::optional<double> median_crossing;  // never-crossed runs count as +inf
  double plateau_correlation = 0.0;
  std::optional<double> empirical_risk;
  double predicted_risk = 0.0;
  double alpha_star = 0.0;
};

std::vector<SweepRow> summarize(const ExperimentResult& result);

// Grid over config.sweep_n x config.sweep_lambda (either empty -> the single
// config value). Iterates are always stored so risk can be reported.
std::vector<SweepRow> sweep(const ExperimentConfig& config);

struct DiagnosticReport {
  std::vector<GaussianityStats> gaussianity;
  std::vector<double> gram_eigenvalues;
  std::size_t gram_window = 0;
};

// Gaussianity and near-orthonormality diagnostics for run 0 of the first init
// kind in the config.
DiagnosticReport diagnose(const ExperimentConfig& config,
                          std::size_t window = kOrthonormalityWindow);

struct SeTableRow {
  double lambda = 0.0;
  double alpha_star = 0.0;
  double asymptotic_risk = 0.0;
  bool sub_resolution = false;
};

std::vector<SeTableRow> se_table(const std::vector<double>& lambdas);

}  // namespace z2amp
