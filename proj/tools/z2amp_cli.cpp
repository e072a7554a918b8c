// Command-line front end. Talks to the library only through z2amp.h.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "z2amp/z2amp.h"

namespace {

struct CliFailure {
  z2amp_status status;
  std::string message;
};

void check(z2amp_status status) {
  if (status != Z2AMP_OK) throw CliFailure{status, z2amp_last_error()};
}

std::string config_get(const z2amp_config* config, const char* key) {
  size_t needed = 0;
  check(z2amp_config_get(config, key, nullptr, 0, &needed));
  std::string value(needed, '\0');
  check(z2amp_config_get(config, key, value.data(), value.size(), nullptr));
  value.resize(needed - 1);
  return value;
}

void print_outputs() {
  std::string outputs = z2amp_last_outputs();
  std::cout << outputs;
}

// Owns a config handle for the lifetime of one command.
struct Config {
  z2amp_config* handle = nullptr;
  Config() { check(z2amp_config_create(&handle)); }
  ~Config() { z2amp_config_destroy(handle); }
  Config(const Config&) = delete;
  Config& operator=(const Config&) = delete;

  void set(const char* key, const std::string& value) {
    check(z2amp_config_set(handle, key, value.c_str()));
  }
};

// Flags shared by simulate, sweep and diagnose. Strings are forwarded to the
// library's key=value parser so the CLI and config files accept the same text.
struct ExperimentFlags {
  std::string config_file;
  std::string preset;
  bool allow_long = false;
  std::optional<std::string> n, lambda, seeds, tmax, backend, seed, out, format, workers, risk_t;
  std::vector<std::string> inits;
  bool store_iterates = false;
  bool diagnostics = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_file, "key=value config file")->check(CLI::ExistingFile);
    cmd->add_option("--preset", preset, "desk or paper");
    cmd->add_flag("--allow-long", allow_long, "permit presets with long runtimes");
    cmd->add_option("--n", n, "dimension");
    cmd->add_option("--lambda", lambda, "signal-to-noise ratio");
    cmd->add_option("--seeds", seeds, "independent runs per init kind");
    cmd->add_option("--tmax", tmax, "AMP iterations");
    cmd->add_option("--init", inits, "random or spectral (repeatable)")->take_all();
    cmd->add_option("--backend", backend, "dense or streamed");
    cmd->add_option("--seed", seed, "base seed");
    cmd->add_option("--out", out, "output path prefix");
    cmd->add_option("--format", format, "csv or json");
    cmd->add_option("--workers", workers, "seed-level threads");
    cmd->add_option("--risk-t", risk_t, "iteration for the per-run risk (0: tmax)");
    cmd->add_flag("--store-iterates", store_iterates, "keep x_t and report risk");
    cmd->add_flag("--diagnostics", diagnostics, "also write the diagnose report");
  }

  // Preset, then config file, then explicit flags.
  void apply(Config& config) const {
    if (!preset.empty()) config.set("preset", preset);
    if (!config_file.empty()) check(z2amp_config_load_file(config.handle, config_file.c_str()));
    const std::pair<const char*, const std::optional<std::string>*> scalars[] = {
        {"n", &n},       {"lambda", &lambda}, {"seeds", &seeds}, {"tmax", &tmax},
        {"backend", &backend}, {"seed", &seed}, {"out", &out},   {"format", &format},
        {"workers", &workers}, {"risk_t", &risk_t}};
    for (const auto& [key, value] : scalars)
      if (*value) config.set(key, **value);
    if (!inits.empty()) {
      std::string joined;
      for (const auto& k : inits) joined += (joined.empty() ? "" : ",") + k;
      config.set("init", joined);
    }
    if (store_iterates) config.set("store_iterates", "1");
    if (diagnostics) config.set("diagnostics", "1");
    check(z2amp_config_validate(config.handle));
  }

  // Lambdas a preset asks for, unless --lambda pins one. Enforces the
  // --allow-long gate.
  std::vector<double> preset_lambdas(const Config& config) const {
    const std::string name = config_get(config.handle, "preset");
    if (name.empty()) return {};
    int long_running = 0;
    size_t count = 0;
    check(z2amp_preset_info(name.c_str(), &long_running, nullptr, 0, &count));
    if (long_running && !allow_long)
      throw CliFailure{Z2AMP_INVALID_ARGUMENT,
                       "preset '" + name + "' is long-running; pass --allow-long to run it"};
    std::vector<double> lambdas(count);
    check(z2amp_preset_info(name.c_str(), nullptr, lambdas.data(), lambdas.size(), &count));
    if (lambda) return {};
    return lambdas;
  }
};

void run_simulate(const ExperimentFlags& flags) {
  Config config;
  flags.apply(config);
  std::vector<double> lambdas = flags.preset_lambdas(config);
  const std::string prefix = config_get(config.handle, "out");

  const auto simulate_one = [&](const std::string& out) {
    z2amp_result* result = nullptr;
    check(z2amp_simulate(config.handle, &result));
    const z2amp_status status = z2amp_result_emit(result, out.c_str());
    z2amp_result_destroy(result);
    check(status);
    print_outputs();
    if (config_get(config.handle, "diagnostics") == "1") {
      check(z2amp_diagnose(config.handle, out.c_str()));
      print_outputs();
    }
  };

  if (lambdas.size() <= 1) {
    if (lambdas.size() == 1) config.set("lambda", std::to_string(lambdas.front()));
    simulate_one(prefix);
    return;
  }
  for (double l : lambdas) {
    config.set("lambda", CLI::detail::to_string(l));
    simulate_one(prefix + "_lambda" + config_get(config.handle, "lambda"));
  }
}

void run_sweep(const ExperimentFlags& flags, const std::vector<std::string>& sweep_n,
               const std::vector<std::string>& sweep_lambda) {
  Config config;
  flags.apply(config);
  const std::vector<double> lambdas = flags.preset_lambdas(config);
  const auto join = [](const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
    return out;
  };
  if (!sweep_n.empty()) config.set("sweep_n", join(sweep_n));
  if (!sweep_lambda.empty()) {
    config.set("sweep_lambda", join(sweep_lambda));
  } else if (!lambdas.empty() && config_get(config.handle, "sweep_lambda").empty()) {
    std::vector<std::string> text;
    for (double l : lambdas) text.push_back(CLI::detail::to_string(l));
    config.set("sweep_lambda", join(text));
  }
  check(z2amp_sweep(config.handle, nullptr));
  print_outputs();
}

void run_diagnose(const ExperimentFlags& flags) {
  Config config;
  flags.apply(config);
  flags.preset_lambdas(config);
  check(z2amp_diagnose(config.handle, nullptr));
  print_outputs();
}

void run_se(std::vector<double> lambdas, double from, double to, double step,
            const std::optional<std::string>& out, const std::string& format) {
  if (lambdas.empty()) {
    if (!(step > 0.0) || to < from)
      throw CliFailure{Z2AMP_INVALID_ARGUMENT, "grid needs --step > 0 and --to >= --from"};
    const int count = static_cast<int>((to - from) / step + 1e-9) + 1;
    for (int k = 0; k < count; ++k) lambdas.push_back(from + k * step);
  }
  std::printf("lambda,alpha_star,asymptotic_risk,sub_resolution\n");
  for (double l : lambdas) {
    double alpha = 0.0, risk = 0.0;
    int sub = 0;
    check(z2amp_fixed_point(l, &alpha, &sub));
    check(z2amp_asymptotic_risk(l, &risk));
    std::printf("%.10g,%.17g,%.17g,%d\n", l, alpha, risk, sub);
  }
  if (out) {
    z2amp_format fmt = Z2AMP_FORMAT_CSV;
    if (format == "json") fmt = Z2AMP_FORMAT_JSON;
    else if (format != "csv") throw CliFailure{Z2AMP_INVALID_ARGUMENT, "unknown format " + format};
    check(z2amp_se_table(lambdas.data(), lambdas.size(), fmt, out->c_str()));
    std::cerr << z2amp_last_outputs();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate message passing for Z2 synchronization"};
  app.require_subcommand(1);

  ExperimentFlags simulate_flags, sweep_flags, diagnose_flags;
  auto* simulate = app.add_subcommand("simulate", "run AMP over seeds and init kinds");
  simulate_flags.attach(simulate);

  auto* sweep = app.add_subcommand("sweep", "summary table over an (n, lambda) grid");
  sweep_flags.attach(sweep);
  std::vector<std::string> sweep_n, sweep_lambda;
  sweep->add_option("--sweep-n", sweep_n, "grid values for n")->delimiter(',');
  sweep->add_option("--sweep-lambda", sweep_lambda, "grid values for lambda")->delimiter(',');

  auto* diagnose = app.add_subcommand("diagnose", "gaussianity and orthonormality for run 0");
  diagnose_flags.attach(diagnose);

  auto* se = app.add_subcommand("se", "tabulate lambda -> alpha*, asymptotic risk");
  std::vector<double> se_lambdas;
  double se_from = 1.0, se_to = 2.0, se_step = 0.05;
  std::optional<std::string> se_out;
  std::string se_format = "csv";
  se->add_option("--lambda", se_lambdas, "explicit lambda values (repeatable)")->delimiter(',');
  se->add_option("--from", se_from, "grid start");
  se->add_option("--to", se_to, "grid end");
  se->add_option("--step", se_step, "grid step");
  se->add_option("--out", se_out, "also write <out>_se.csv or .json");
  se->add_option("--format", se_format, "csv or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[" << z2amp_status_name(Z2AMP_INVALID_ARGUMENT) << "]: " << e.what()
              << "\n";
    return Z2AMP_INVALID_ARGUMENT;
  }

  try {
    if (*simulate) run_simulate(simulate_flags);
    else if (*sweep) run_sweep(sweep_flags, sweep_n, sweep_lambda);
    else if (*diagnose) run_diagnose(diagnose_flags);
    else if (*se) run_se(se_lambdas, se_from, se_to, se_step, se_out, se_format);
  } catch (const CliFailure& f) {
    std::cerr << "error[" << z2amp_status_name(f.status) << "]: " << f.message << "\n";
    return static_cast<int>(f.status);
  }
  return 0;
}
