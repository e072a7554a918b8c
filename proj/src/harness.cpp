#include "z2amp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "z2amp/error.hpp"
#include "z2amp/state_evolution.hpp"

namespace z2amp {

namespace {

struct InitOutput {
  std::vector<TrajectoryRow> rows;
  RunSummary summary;
};

SpikedModel build_run_model(const ExperimentConfig& config, std::uint64_t seed) {
  return SpikedModel::build({config.n, config.lambda, seed, config.backend, NoiseKind::Gaussian});
}

InitOutput run_one(const ExperimentConfig& config, const SpikedModel& model, InitKind kind,
                   int run) {
  InitSpec spec;
  spec.kind = kind;
  spec.init_seed = model.seed();
  spec.power_iters = config.power_iters;
  spec.spectral_scale = config.spectral_scale;

  RecordOptions options;
  options.store_iterates = config.store_iterates;
  options.matvec_workers = config.matvec_workers;
  const AmpTrajectory traj = z2amp::run(model, spec, config.t_max, options);

  InitOutput out;
  out.summary.init = kind;
  out.summary.run = run;
  out.summary.model_seed = model.seed();

  SeAgreement agreement;
  if (config.lambda > 1.0) {
    const AlphaSeries alpha = alpha_oracle(traj, model);
    agreement = se_agreement(alpha, config.lambda);
    if (agreement.crossed) {
      out.summary.crossing = agreement.crossing;
      out.summary.se_max_abs_log_ratio = agreement.max_abs_log_ratio;
    }
  }

  const int tail = std::max(1, config.t_max / 10);
  double plateau = 0.0;
  for (int k = config.t_max - tail; k < config.t_max; ++k) plateau += traj.records[k].correlation;
  out.summary.plateau_correlation = plateau / tail;

  out.rows.reserve(traj.records.size());
  for (const auto& rec : traj.records) {
    TrajectoryRow row;
    row.init = kind;
    row.run = run;
    row.record = rec;
    // alpha_oracle of record t is alpha_{t+1}.
    const int index = rec.t + 1;
    if (agreement.crossed && index >= agreement.crossing && index <= agreement.t_end)
      row.se_alpha = agreement.se_alpha[static_cast<std::size_t>(index - agreement.crossing)];
    if (config.store_iterates) row.empirical_risk = risk_at(traj, model, rec.t).empirical_risk;
    out.rows.push_back(row);
  }

  if (config.store_iterates) {
    const int t = config.risk_t == 0 ? config.t_max : config.risk_t;
    out.summary.risk = risk_at(traj, model, t);
  }
  return out;
}

// Runs body(r) for r in [0, count) on `workers` threads. On failure, rethrows
// the error of the lowest failing index so the outcome is deterministic.
template <class Body>
void parallel_for(int count, unsigned workers, Body&& body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int r = next++; r < count; r = next++) {
      try {
        body(r);
      } catch (...) {
        errors[static_cast<std::size_t>(r)] = std::current_exception();
      }
    }
  };
  workers = std::max(1u, std::min(workers, static_cast<unsigned>(count)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double sample_sd(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

std::optional<double> median_with_infinity(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  const double mid = values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
  if (!std::isfinite(mid)) return std::nullopt;
  return mid;
}

}  // namespace

std::uint64_t run_seed(const ExperimentConfig& config, int run) {
  return config.base_seed + static_cast<std::uint64_t>(run);
}

std::vector<AggregateCurve> aggregate(const std::vector<TrajectoryRow>& rows,
                                      const std::vector<InitKind>& inits, int t_max) {
  std::vector<AggregateCurve> curves;
  for (InitKind kind : inits) {
    std::vector<std::vector<double>> by_t(static_cast<std::size_t>(t_max));
    for (const auto& row : rows)
      if (row.init == kind && row.record.t >= 1 && row.record.t <= t_max)
        by_t[static_cast<std::size_t>(row.record.t - 1)].push_back(row.record.correlation);

    AggregateCurve curve;
    curve.init = kind;
    for (const auto& values : by_t) {
      double sum = 0.0;
      for (double v : values) sum += v;
      const double mean = values.empty() ? 0.0 : sum / static_cast<double>(values.size());
      curve.mean_corr.push_back(mean);
      curve.sd_corr.push_back(sample_sd(values, mean));
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);

  ExperimentResult result;
  result.config = config;
  result.alpha_star = fixed_point(config.lambda);
  result.predicted_risk = asymptotic_risk(config.lambda);

  const std::size_t kinds = config.inits.size();
  std::vector<std::vector<InitOutput>> outputs(static_cast<std::size_t>(config.n_seeds));
  parallel_for(config.n_seeds, config.workers, [&](int r) {
    // One model draw per run index, shared by every init kind.
    const SpikedModel model = build_run_model(config, run_seed(config, r));
    auto& slot = outputs[static_cast<std::size_t>(r)];
    for (InitKind kind : config.inits) slot.push_back(run_one(config, model, kind, r));
  });

  for (std::size_t k = 0; k < kinds; ++k) {
    for (auto& per_run : outputs) {
      auto& out = per_run[k];
      result.rows.insert(result.rows.end(), out.rows.begin(), out.rows.end());
      result.runs.push_back(out.summary);
    }
  }
  result.curves = aggregate(result.rows, config.inits, config.t_max);
  return result;
}

std::vector<SweepRow> summarize(const ExperimentResult& result) {
  std::vector<SweepRow> rows;
  const auto& config = result.config;
  for (InitKind kind : config.inits) {
    SweepRow row;
    row.n = config.n;
    row.lambda = config.lambda;
    row.init = kind;
    row.predicted_risk = result.predicted_risk;
    row.alpha_star = result.alpha_star;

    std::vector<double> crossings;
    double plateau = 0.0;
    double risk = 0.0;
    int risk_count = 0;
    for (const auto& run : result.runs) {
      if (run.init != kind) continue;
      ++row.runs;
      if (run.crossing) ++row.crossed;
      crossings.push_back(run.crossing ? static_cast<double>(*run.crossing)
                                       : std::numeric_limits<double>::infinity());
      plateau += run.plateau_correlation;
      if (run.risk) {
        risk += run.risk->empirical_risk;
        ++risk_count;
      }
    }
    if (row.runs > 0) plateau /= row.runs;
    row.plateau_correlation = plateau;
    row.median_crossing = median_with_infinity(std::move(crossings));
    if (risk_count > 0) row.empirical_risk = risk / risk_count;
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> sweep(const ExperimentConfig& config) {
  const std::vector<std::size_t> ns = config.sweep_n.empty() ? std::vector{config.n} : config.sweep_n;
  const std::vector<double> lambdas =
      config.sweep_lambda.empty() ? std::vector{config.lambda} : config.sweep_lambda;

  std::vector<SweepRow> table;
  for (std::size_t n : ns) {
    for (double lambda : lambdas) {
      ExperimentConfig cell = config;
      cell.n = n;
      cell.lambda = lambda;
      cell.store_iterates = true;
      const auto rows = summarize(run_experiment(cell));
      table.insert(table.end(), rows.begin(), rows.end());
    }
  }
  return table;
}

DiagnosticReport diagnose(const ExperimentConfig& config, std::size_t window) {
  validate(config);
  const SpikedModel model = build_run_model(config, run_seed(config, 0));
  InitSpec spec;
  spec.kind = config.inits.front();
  spec.init_seed = model.seed();
  spec.power_iters = config.power_iters;
  spec.spectral_scale = config.spectral_scale;

  RecordOptions options;
  options.store_iterates = true;
  options.store_denoised = true;
  options.matvec_workers = config.matvec_workers;
  const AmpTrajectory traj = z2amp::run(model, spec, config.t_max, options);

  DiagnosticReport report;
  report.gaussianity = gaussianity_diagnostic(traj, model);
  report.gram_window = std::min(window, traj.denoised.size());
  report.gram_eigenvalues = orthonormality_diagnostic(traj.denoised, window);
  return report;
}

std::vector<SeTableRow> se_table(const std::vector<double>& lambdas) {
  std::vector<SeTableRow> rows;
  rows.reserve(lambdas.size());
  for (double lambda : lambdas) {
    const FixedPoint fp = solve_fixed_point(lambda);
    rows.push_back({lambda, fp.alpha, asymptotic_risk(lambda), fp.sub_resolution});
  }
  return rows;
}

}  // namespace z2amp
