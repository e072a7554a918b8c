#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "z2amp/amp_engine.hpp"
#include "z2amp/model.hpp"

namespace z2amp {

enum class OutputFormat { Csv, Json };

struct ExperimentConfig {
  std::size_t n = 2000;
  double lambda = 1.2;
  int n_seeds = 20;
  int t_max = 150;
  std::vector<InitKind> inits{InitKind::Random, InitKind::Spectral};
  Backend backend = Backend::Dense;
  std::uint64_t base_seed = 1;
  int power_iters = 100;
  double spectral_scale = -1.0;  // negative: lambda
  std::string out = "z2amp";     // output path prefix
  OutputFormat format = OutputFormat::Csv;
  bool store_iterates = false;  // enables the empirical_risk column
  bool diagnostics = false;     // simulate also writes the gaussianity report
  int risk_t = 0;               // iteration for per-run risk; 0 means t_max
  unsigned workers = 1;         // seed-level threads
  unsigned matvec_workers = 1;  // row-block threads inside each matvec
  // Sweep grid; empty means the single value above.
  std::vector<std::size_t> sweep_n;
  std::vector<double> sweep_lambda;
  std::string preset;  // name of the last preset applied, if any
};

// Throws InvalidArgument with the offending field named.
void validate(const ExperimentConfig& config);

// Apply one key=value setting. Keys mirror the CLI flags: n, lambda, seeds,
// tmax, init (comma list, or repeated to append), backend, seed, out, format,
// store_iterates, diagnostics, risk_t, workers, matvec_workers, power_iters,
// spectral_scale, sweep_n, sweep_lambda, preset.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

// Flat key=value file; '#' starts a comment, blank lines are ignored.
void load_config_file(ExperimentConfig& config, const std::filesystem::path& path);

struct Preset {
  std::string_view name;
  std::size_t n;
  std::vector<double> lambdas;
  int n_seeds;
  int t_max;
  Backend backend;
  bool long_running;
};

const std::vector<Preset>& presets();
const Preset& find_preset(std::string_view name);

// Copies the preset's scalar fields; the first lambda becomes config.lambda.
void apply_preset(ExperimentConfig& config, const Preset& preset);

std::string_view to_string(InitKind kind) noexcept;
std::string_view to_string(Backend backend) noexcept;
InitKind parse_init_kind(std::string_view text);
Backend parse_backend(std::string_view text);
OutputFormat parse_format(std::string_view text);

}  // namespace z2amp
