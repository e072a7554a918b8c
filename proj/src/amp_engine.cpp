#include "z2amp/amp_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "z2amp/error.hpp"

namespace z2amp {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void normalize(std::vector<double>& v) {
  const double norm = std::sqrt(dot(v, v));
  if (!(norm > 0.0)) throw Error(ErrorCategory::DegenerateInput, "cannot normalize a zero vector");
  for (double& e : v) e /= norm;
}

double plugin_magnitude(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  const double norm2 = dot(x, x);
  return std::sqrt(std::max(n * (norm2 - 1.0), 1.0) / n);
}

}  // namespace

SpectralInfo power_iteration(const SpikedModel& model, std::uint64_t seed, int max_iters,
                             double rayleigh_tol, unsigned workers) {
  if (max_iters < 1)
    throw Error(ErrorCategory::InvalidArgument, "spectral initialization needs power_iters >= 1");
  const std::size_t n = model.n();
  const CounterRng rng(seed);

  SpectralInfo info;
  info.eigenvector.resize(n);
  for (std::size_t i = 0; i < n; ++i) info.eigenvector[i] = rng.normal(Stream::PowerStart, i);
  normalize(info.eigenvector);

  std::vector<double> next(n);
  double previous = 0.0;
  for (int k = 1; k <= max_iters; ++k) {
    model.matvec(info.eigenvector, next, workers);
    info.rayleigh = dot(info.eigenvector, next);
    normalize(next);
    info.eigenvector.swap(next);
    info.iterations = k;
    if (k > 1 && std::abs(info.rayleigh - previous) < rayleigh_tol) break;
    previous = info.rayleigh;
  }
  return info;
}

AmpEngine::AmpEngine(const SpikedModel& model, const InitSpec& spec, unsigned matvec_workers)
    : model_(&model), workers_(matvec_workers), x_(model.n()), eta_prev_(model.n(), 0.0) {
  const std::size_t n = model.n();
  switch (spec.kind) {
    case InitKind::Random: {
      const CounterRng rng(spec.init_seed);
      const double scale = 1.0 / std::sqrt(static_cast<double>(n));
      for (std::size_t i = 0; i < n; ++i) x_[i] = rng.normal(Stream::Init, i) * scale;
      break;
    }
    case InitKind::Spectral: {
      spectral_ = power_iteration(model, spec.init_seed, spec.power_iters, spec.rayleigh_tol,
                                  matvec_workers);
      const double scale = spec.spectral_scale < 0.0 ? model.lambda() : spec.spectral_scale;
      for (std::size_t i = 0; i < n; ++i) x_[i] = scale * spectral_->eigenvector[i];
      break;
    }
  }
}

AmpRecord AmpEngine::step(std::vector<double>* denoised_out) {
  const std::size_t n = model_->n();
  const auto& v = model_->signal().entries;

  const DenoiserParams params = compute_params(x_);
  std::vector<double> eta = apply_denoiser(params, x_);

  AmpRecord rec;
  rec.t = t_;
  rec.pi = params.pi;
  rec.gamma = params.gamma;
  rec.onsager = params.mean_derivative;
  const double overlap = dot(v, eta);
  rec.alpha_oracle = model_->lambda() * overlap;
  rec.correlation = std::abs(overlap);

  // The plug-in estimate only sees |alpha|; its orientation follows the sign
  // of successive denoised iterates.
  if (t_ > 1 && dot(eta, eta_prev_) < 0.0) plugin_sign_ = -plugin_sign_;

  std::vector<double> next(n);
  model_->matvec(eta, next, workers_);
  for (std::size_t i = 0; i < n; ++i) next[i] -= params.mean_derivative * eta_prev_[i];

  rec.alpha_plugin = plugin_sign_ * plugin_magnitude(next);

  if (denoised_out) *denoised_out = eta;
  eta_prev_ = std::move(eta);
  x_ = std::move(next);
  ++t_;
  return rec;
}

AmpTrajectory run(const SpikedModel& model, const InitSpec& spec, int t_max,
                  const RecordOptions& options) {
  if (t_max < 1) throw Error(ErrorCategory::InvalidArgument, "t_max must be >= 1");
  AmpEngine engine(model, spec, options.matvec_workers);

  AmpTrajectory traj;
  traj.n = model.n();
  traj.lambda = model.lambda();
  traj.init = spec.kind;
  traj.spectral = engine.spectral();
  traj.records.reserve(static_cast<std::size_t>(t_max));

  std::vector<double> eta;
  for (int t = 1; t <= t_max; ++t) {
    if (options.store_iterates)
      traj.iterates.emplace_back(engine.current().begin(), engine.current().end());
    traj.records.push_back(engine.step(options.store_denoised ? &eta : nullptr));
    if (options.store_denoised) traj.denoised.push_back(std::move(eta));
  }
  return traj;
}

}  // namespace z2amp
