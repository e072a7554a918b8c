#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "z2amp/denoiser.hpp"
#include "z2amp/model.hpp"

namespace z2amp {

enum class InitKind { Random, Spectral };

struct InitSpec {
  InitKind kind = InitKind::Random;
  std::uint64_t init_seed = 0;
  // Spectral only.
  int power_iters = 100;
  double rayleigh_tol = 1e-10;
  // x_1 = spectral_scale * v_hat; negative means "use lambda".
  double spectral_scale = -1.0;
};

// Outcome of the power method used by spectral initialization.
struct SpectralInfo {
  int iterations = 0;
  double rayleigh = 0.0;
  std::vector<double> eigenvector;
};

// Unit top-eigenvector estimate of M by power iteration from a random start
// drawn from the PowerStart stream of `seed`. Stops early once successive
// Rayleigh quotients differ by less than `rayleigh_tol`.
SpectralInfo power_iteration(const SpikedModel& model, std::uint64_t seed, int max_iters,
                             double rayleigh_tol = 1e-10, unsigned workers = 1);

// One row per AMP iteration t = 1, 2, ...
// alpha_oracle and alpha_plugin refer to the signal strength of the *next*
// iterate: alpha_oracle = lambda v*^T eta_t(x_t) (= alpha_{t+1}) and
// |alpha_plugin| = pi_{t+1} / sqrt(n).
struct AmpRecord {
  int t = 0;
  double pi = 0.0;
  double gamma = 0.0;
  double onsager = 0.0;  // <eta_t'(x_t)>
  double alpha_oracle = 0.0;
  double alpha_plugin = 0.0;
  double correlation = 0.0;  // |<eta_t(x_t), v*>|
};

struct RecordOptions {
  bool store_iterates = false;  // keep x_t
  bool store_denoised = false;  // keep eta_t(x_t)
  unsigned matvec_workers = 1;
};

struct AmpTrajectory {
  std::size_t n = 0;
  double lambda = 0.0;
  InitKind init = InitKind::Random;
  std::vector<AmpRecord> records;
  std::vector<std::vector<double>> iterates;  // x_t for t = 1..T when stored
  std::vector<std::vector<double>> denoised;  // eta_t(x_t) when stored
  std::optional<SpectralInfo> spectral;
};

// Engine state between steps: the current iterate x_t and the previous
// denoised iterate eta_{t-1}(x_{t-1}) (zero before the first step).
class AmpEngine {
 public:
  AmpEngine(const SpikedModel& model, const InitSpec& spec, unsigned matvec_workers = 1);

  int t() const noexcept { return t_; }
  std::span<const double> current() const noexcept { return x_; }
  std::span<const double> previous_denoised() const noexcept { return eta_prev_; }
  const std::optional<SpectralInfo>& spectral() const noexcept { return spectral_; }

  // Performs x_{t+1} = M eta_t(x_t) - <eta_t'(x_t)> eta_{t-1}(x_{t-1}) and
  // returns the record for t. `denoised_out`, when non-null, receives eta_t(x_t).
  AmpRecord step(std::vector<double>* denoised_out = nullptr);

 private:
  const SpikedModel* model_;
  unsigned workers_;
  int t_ = 1;
  std::vector<double> x_;
  std::vector<double> eta_prev_;
  double plugin_sign_ = 1.0;
  std::optional<SpectralInfo> spectral_;
};

AmpTrajectory run(const SpikedModel& model, const InitSpec& spec, int t_max,
                  const RecordOptions& options = {});

}  // namespace z2amp
