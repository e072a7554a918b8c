#include "z2amp/z2amp.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "z2amp/amp_engine.hpp"
#include "z2amp/config.hpp"
#include "z2amp/emit.hpp"
#include "z2amp/error.hpp"
#include "z2amp/harness.hpp"
#include "z2amp/metrics.hpp"
#include "z2amp/model.hpp"
#include "z2amp/state_evolution.hpp"

struct z2amp_model {
  z2amp::SpikedModel model;
};

struct z2amp_trajectory {
  z2amp::AmpTrajectory trajectory;
};

struct z2amp_config {
  z2amp::ExperimentConfig config;
};

struct z2amp_result {
  z2amp::ExperimentResult result;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_outputs;

z2amp_status to_status(z2amp::ErrorCategory category) {
  using z2amp::ErrorCategory;
  switch (category) {
    case ErrorCategory::InvalidArgument: return Z2AMP_INVALID_ARGUMENT;
    case ErrorCategory::DimensionMismatch: return Z2AMP_DIMENSION_MISMATCH;
    case ErrorCategory::DegenerateInput: return Z2AMP_DEGENERATE_INPUT;
    case ErrorCategory::OutOfMemory: return Z2AMP_OUT_OF_MEMORY;
    case ErrorCategory::Io: return Z2AMP_IO_ERROR;
    case ErrorCategory::NoCrossing: return Z2AMP_NO_CROSSING;
    case ErrorCategory::Internal: return Z2AMP_INTERNAL;
  }
  return Z2AMP_INTERNAL;
}

z2amp_status fail(z2amp_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <class Body>
z2amp_status guarded(Body&& body) {
  last_error.clear();
  try {
    body();
    return Z2AMP_OK;
  } catch (const z2amp::Error& e) {
    return fail(to_status(e.category()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(Z2AMP_OUT_OF_MEMORY, "allocation failed");
  } catch (const std::exception& e) {
    return fail(Z2AMP_INTERNAL, e.what());
  } catch (...) {
    return fail(Z2AMP_INTERNAL, "unknown error");
  }
}

void require(bool condition, const char* message) {
  if (!condition) throw z2amp::Error(z2amp::ErrorCategory::InvalidArgument, message);
}

void record_outputs(const std::vector<std::filesystem::path>& paths) {
  last_outputs.clear();
  for (const auto& p : paths) last_outputs += p.string() + '\n';
}

std::string join_sizes(const std::vector<std::size_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + std::to_string(values[i]);
  return out;
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i)
    out += (i ? "," : "") + z2amp::format_double(values[i]);
  return out;
}

std::string config_value(const z2amp::ExperimentConfig& c, const std::string& key) {
  using z2amp::format_double;
  if (key == "n") return std::to_string(c.n);
  if (key == "lambda") return format_double(c.lambda);
  if (key == "seeds") return std::to_string(c.n_seeds);
  if (key == "tmax") return std::to_string(c.t_max);
  if (key == "init") {
    std::string out;
    for (std::size_t i = 0; i < c.inits.size(); ++i)
      out += (i ? "," : "") + std::string(z2amp::to_string(c.inits[i]));
    return out;
  }
  if (key == "backend") return std::string(z2amp::to_string(c.backend));
  if (key == "seed") return std::to_string(c.base_seed);
  if (key == "out") return c.out;
  if (key == "format") return c.format == z2amp::OutputFormat::Json ? "json" : "csv";
  if (key == "store_iterates") return c.store_iterates ? "1" : "0";
  if (key == "diagnostics") return c.diagnostics ? "1" : "0";
  if (key == "risk_t") return std::to_string(c.risk_t);
  if (key == "workers") return std::to_string(c.workers);
  if (key == "matvec_workers") return std::to_string(c.matvec_workers);
  if (key == "power_iters") return std::to_string(c.power_iters);
  if (key == "spectral_scale") return format_double(c.spectral_scale);
  if (key == "sweep_n") return join_sizes(c.sweep_n);
  if (key == "sweep_lambda") return join_doubles(c.sweep_lambda);
  if (key == "preset") return c.preset;
  throw z2amp::Error(z2amp::ErrorCategory::InvalidArgument, "unknown config key '" + key + "'");
}

std::string prefix_or(const char* prefix, const z2amp::ExperimentConfig& config) {
  return prefix ? std::string(prefix) : config.out;
}

}  // namespace

extern "C" {

const char* z2amp_status_name(z2amp_status status) {
  switch (status) {
    case Z2AMP_OK: return "ok";
    case Z2AMP_INVALID_ARGUMENT: return "invalid_argument";
    case Z2AMP_DIMENSION_MISMATCH: return "dimension_mismatch";
    case Z2AMP_DEGENERATE_INPUT: return "degenerate_input";
    case Z2AMP_OUT_OF_MEMORY: return "out_of_memory";
    case Z2AMP_IO_ERROR: return "io_error";
    case Z2AMP_NO_CROSSING: return "no_crossing";
    case Z2AMP_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* z2amp_last_error(void) { return last_error.c_str(); }

const char* z2amp_last_outputs(void) { return last_outputs.c_str(); }

z2amp_status z2amp_model_create(size_t n, double lambda, uint64_t seed, z2amp_backend backend,
                                z2amp_model** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    require(backend == Z2AMP_BACKEND_DENSE || backend == Z2AMP_BACKEND_STREAMED,
            "unknown backend");
    z2amp::ModelParams params;
    params.n = n;
    params.lambda = lambda;
    params.seed = seed;
    params.backend =
        backend == Z2AMP_BACKEND_DENSE ? z2amp::Backend::Dense : z2amp::Backend::Streamed;
    *out = new z2amp_model{z2amp::SpikedModel::build(params)};
  });
}

void z2amp_model_destroy(z2amp_model* model) { delete model; }

size_t z2amp_model_dim(const z2amp_model* model) { return model ? model->model.n() : 0; }

z2amp_status z2amp_model_signal(const z2amp_model* model, double* out, size_t len) {
  return guarded([&] {
    require(model && out, "null argument");
    const auto& v = model->model.signal().entries;
    if (len != v.size())
      throw z2amp::Error(z2amp::ErrorCategory::DimensionMismatch, "buffer length != n");
    std::memcpy(out, v.data(), len * sizeof(double));
  });
}

z2amp_status z2amp_model_matvec(const z2amp_model* model, const double* y, double* out,
                                size_t len) {
  return guarded([&] {
    require(model && y && out, "null argument");
    if (len != model->model.n())
      throw z2amp::Error(z2amp::ErrorCategory::DimensionMismatch, "buffer length != n");
    model->model.matvec({y, len}, {out, len});
  });
}

z2amp_status z2amp_run(const z2amp_model* model, z2amp_init init, uint64_t init_seed, int t_max,
                       int store_iterates, z2amp_trajectory** out) {
  return guarded([&] {
    require(model && out, "null argument");
    require(init == Z2AMP_INIT_RANDOM || init == Z2AMP_INIT_SPECTRAL, "unknown init kind");
    z2amp::InitSpec spec;
    spec.kind = init == Z2AMP_INIT_RANDOM ? z2amp::InitKind::Random : z2amp::InitKind::Spectral;
    spec.init_seed = init_seed;
    z2amp::RecordOptions options;
    options.store_iterates = store_iterates != 0;
    *out = new z2amp_trajectory{z2amp::run(model->model, spec, t_max, options)};
  });
}

void z2amp_trajectory_destroy(z2amp_trajectory* trajectory) { delete trajectory; }

size_t z2amp_trajectory_length(const z2amp_trajectory* trajectory) {
  return trajectory ? trajectory->trajectory.records.size() : 0;
}

z2amp_status z2amp_trajectory_record(const z2amp_trajectory* trajectory, size_t index,
                                     z2amp_record* out) {
  return guarded([&] {
    require(trajectory && out, "null argument");
    require(index < trajectory->trajectory.records.size(), "record index out of range");
    const auto& r = trajectory->trajectory.records[index];
    *out = {r.t, r.pi, r.gamma, r.onsager, r.alpha_oracle, r.alpha_plugin, r.correlation};
  });
}

z2amp_status z2amp_trajectory_iterate(const z2amp_trajectory* trajectory, size_t index,
                                      double* out, size_t len) {
  return guarded([&] {
    require(trajectory && out, "null argument");
    const auto& iterates = trajectory->trajectory.iterates;
    require(!iterates.empty(), "iterates were not stored");
    require(index < iterates.size(), "iterate index out of range");
    if (len != iterates[index].size())
      throw z2amp::Error(z2amp::ErrorCategory::DimensionMismatch, "buffer length != n");
    std::memcpy(out, iterates[index].data(), len * sizeof(double));
  });
}

z2amp_status z2amp_trajectory_crossing(const z2amp_trajectory* trajectory,
                                       const z2amp_model* model, int* t) {
  return guarded([&] {
    require(trajectory && model && t, "null argument");
    const auto alpha = z2amp::alpha_oracle(trajectory->trajectory, model->model);
    const auto crossing = z2amp::crossing_time(alpha, model->model.lambda());
    if (!crossing)
      throw z2amp::Error(z2amp::ErrorCategory::NoCrossing,
                         "alpha never reached the crossing threshold");
    *t = *crossing;
  });
}

z2amp_status z2amp_trajectory_risk(const z2amp_trajectory* trajectory, const z2amp_model* model,
                                   int t, double* empirical, double* predicted) {
  return guarded([&] {
    require(trajectory && model, "null argument");
    const auto report = z2amp::risk_at(trajectory->trajectory, model->model, t);
    if (empirical) *empirical = report.empirical_risk;
    if (predicted) *predicted = report.predicted_risk;
  });
}

z2amp_status z2amp_h(double tau, double* out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = z2amp::h(tau);
  });
}

z2amp_status z2amp_h_prime(double tau, double* out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = z2amp::h_prime(tau);
  });
}

z2amp_status z2amp_fixed_point(double lambda, double* alpha, int* sub_resolution) {
  return guarded([&] {
    require(alpha != nullptr, "alpha is null");
    const auto fp = z2amp::solve_fixed_point(lambda);
    *alpha = fp.alpha;
    if (sub_resolution) *sub_resolution = fp.sub_resolution ? 1 : 0;
  });
}

z2amp_status z2amp_asymptotic_risk(double lambda, double* out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = z2amp::asymptotic_risk(lambda);
  });
}

z2amp_status z2amp_config_create(z2amp_config** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = new z2amp_config{};
  });
}

void z2amp_config_destroy(z2amp_config* config) { delete config; }

z2amp_status z2amp_config_set(z2amp_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config && key && value, "null argument");
    z2amp::apply_setting(config->config, key, value);
  });
}

z2amp_status z2amp_config_load_file(z2amp_config* config, const char* path) {
  return guarded([&] {
    require(config && path, "null argument");
    z2amp::load_config_file(config->config, path);
  });
}

z2amp_status z2amp_config_get(const z2amp_config* config, const char* key, char* buf, size_t cap,
                              size_t* needed) {
  return guarded([&] {
    require(config && key, "null argument");
    const std::string value = config_value(config->config, key);
    if (needed) *needed = value.size() + 1;
    if (buf && cap > 0) {
      const std::size_t count = std::min(cap - 1, value.size());
      std::memcpy(buf, value.data(), count);
      buf[count] = '\0';
    }
  });
}

z2amp_status z2amp_config_validate(const z2amp_config* config) {
  return guarded([&] {
    require(config != nullptr, "config is null");
    z2amp::validate(config->config);
  });
}

size_t z2amp_preset_count(void) { return z2amp::presets().size(); }

const char* z2amp_preset_name(size_t index) {
  const auto& table = z2amp::presets();
  return index < table.size() ? table[index].name.data() : nullptr;
}

z2amp_status z2amp_preset_info(const char* name, int* long_running, double* lambdas, size_t cap,
                               size_t* count) {
  return guarded([&] {
    require(name != nullptr, "name is null");
    const auto& preset = z2amp::find_preset(name);
    if (long_running) *long_running = preset.long_running ? 1 : 0;
    if (count) *count = preset.lambdas.size();
    for (std::size_t i = 0; lambdas && i < std::min(cap, preset.lambdas.size()); ++i)
      lambdas[i] = preset.lambdas[i];
  });
}

z2amp_status z2amp_simulate(const z2amp_config* config, z2amp_result** out) {
  return guarded([&] {
    require(config && out, "null argument");
    *out = new z2amp_result{z2amp::run_experiment(config->config)};
  });
}

void z2amp_result_destroy(z2amp_result* result) { delete result; }

double z2amp_result_alpha_star(const z2amp_result* result) {
  return result ? result->result.alpha_star : std::numeric_limits<double>::quiet_NaN();
}

double z2amp_result_predicted_risk(const z2amp_result* result) {
  return result ? result->result.predicted_risk : std::numeric_limits<double>::quiet_NaN();
}

size_t z2amp_result_run_count(const z2amp_result* result) {
  return result ? result->result.runs.size() : 0;
}

z2amp_status z2amp_result_run(const z2amp_result* result, size_t index, z2amp_run_summary* out) {
  return guarded([&] {
    require(result && out, "null argument");
    require(index < result->result.runs.size(), "run index out of range");
    const auto& r = result->result.runs[index];
    out->init = r.init == z2amp::InitKind::Random ? Z2AMP_INIT_RANDOM : Z2AMP_INIT_SPECTRAL;
    out->run = r.run;
    out->model_seed = r.model_seed;
    out->crossing = r.crossing.value_or(-1);
    out->plateau_correlation = r.plateau_correlation;
    out->empirical_risk =
        r.risk ? r.risk->empirical_risk : std::numeric_limits<double>::quiet_NaN();
  });
}

z2amp_status z2amp_result_emit(const z2amp_result* result, const char* prefix) {
  return guarded([&] {
    require(result != nullptr, "result is null");
    const auto& config = result->result.config;
    record_outputs(z2amp::emit(result->result, config.format, prefix_or(prefix, config)));
  });
}

z2amp_status z2amp_sweep(const z2amp_config* config, const char* prefix) {
  return guarded([&] {
    require(config != nullptr, "config is null");
    const auto rows = z2amp::sweep(config->config);
    record_outputs(
        z2amp::emit_sweep(rows, config->config.format, prefix_or(prefix, config->config)));
  });
}

z2amp_status z2amp_diagnose(const z2amp_config* config, const char* prefix) {
  return guarded([&] {
    require(config != nullptr, "config is null");
    const auto report = z2amp::diagnose(config->config);
    record_outputs(z2amp::emit_diagnostics(report, config->config.format,
                                           prefix_or(prefix, config->config)));
  });
}

z2amp_status z2amp_se_table(const double* lambdas, size_t count, z2amp_format format,
                            const char* prefix) {
  return guarded([&] {
    require(lambdas && count > 0, "empty lambda grid");
    require(prefix != nullptr, "prefix is null");
    for (std::size_t i = 0; i < count; ++i)
      require(std::isfinite(lambdas[i]) && lambdas[i] > 0.0, "lambda must be > 0");
    const auto rows = z2amp::se_table({lambdas, lambdas + count});
    record_outputs(z2amp::emit_se_table(
        rows, format == Z2AMP_FORMAT_JSON ? z2amp::OutputFormat::Json : z2amp::OutputFormat::Csv,
        prefix));
  });
}

}  // extern "C"
