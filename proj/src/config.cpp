#include "z2amp/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

#include "z2amp/error.hpp"

namespace z2amp {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorCategory::InvalidArgument,
              "invalid value '" + std::string(value) + "' for '" + std::string(key) + "'");
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) bad_value(key, text);
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string v = lower(trim(text));
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  bad_value(key, text);
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> items;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (!item.empty()) items.push_back(item);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return items;
}

}  // namespace

std::string_view to_string(InitKind kind) noexcept {
  return kind == InitKind::Random ? "random" : "spectral";
}

std::string_view to_string(Backend backend) noexcept {
  return backend == Backend::Dense ? "dense" : "streamed";
}

InitKind parse_init_kind(std::string_view text) {
  const std::string v = lower(trim(text));
  if (v == "random") return InitKind::Random;
  if (v == "spectral") return InitKind::Spectral;
  bad_value("init", text);
}

Backend parse_backend(std::string_view text) {
  const std::string v = lower(trim(text));
  if (v == "dense") return Backend::Dense;
  if (v == "streamed") return Backend::Streamed;
  bad_value("backend", text);
}

OutputFormat parse_format(std::string_view text) {
  const std::string v = lower(trim(text));
  if (v == "csv") return OutputFormat::Csv;
  if (v == "json") return OutputFormat::Json;
  bad_value("format", text);
}

void validate(const ExperimentConfig& c) {
  const auto fail = [](const std::string& what) {
    throw Error(ErrorCategory::InvalidArgument, "config: " + what);
  };
  if (c.n < 1) fail("n must be >= 1");
  if (!(c.lambda > 0.0) || !std::isfinite(c.lambda)) fail("lambda must be > 0");
  if (c.n_seeds < 1) fail("seeds must be >= 1");
  if (c.t_max < 1) fail("tmax must be >= 1");
  if (c.inits.empty()) fail("at least one init kind is required");
  if (c.power_iters < 1) fail("power_iters must be >= 1");
  if (c.risk_t < 0 || c.risk_t > c.t_max) fail("risk_t must lie in [0, tmax]");
  if (c.workers < 1) fail("workers must be >= 1");
  if (c.matvec_workers < 1) fail("matvec_workers must be >= 1");
  if (c.out.empty()) fail("out prefix is empty");
  for (std::size_t n : c.sweep_n)
    if (n < 1) fail("sweep_n entries must be >= 1");
  for (double l : c.sweep_lambda)
    if (!(l > 0.0) || !std::isfinite(l)) fail("sweep_lambda entries must be > 0");
}

void apply_preset(ExperimentConfig& config, const Preset& preset) {
  config.n = preset.n;
  config.lambda = preset.lambdas.front();
  config.n_seeds = preset.n_seeds;
  config.t_max = preset.t_max;
  config.backend = preset.backend;
  config.preset = std::string(preset.name);
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table{
      {"desk", 2000, {1.2}, 20, 150, Backend::Dense, false},
      {"paper", 10000, {1.15, 1.2}, 20, 150, Backend::Streamed, true},
  };
  return table;
}

const Preset& find_preset(std::string_view name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  bad_value("preset", name);
}

void apply_setting(ExperimentConfig& c, std::string_view raw_key, std::string_view value) {
  const std::string key = lower(trim(raw_key));
  value = trim(value);
  if (key == "n") {
    c.n = parse_number<std::size_t>(key, value);
  } else if (key == "lambda") {
    c.lambda = parse_number<double>(key, value);
  } else if (key == "seeds") {
    c.n_seeds = parse_number<int>(key, value);
  } else if (key == "tmax") {
    c.t_max = parse_number<int>(key, value);
  } else if (key == "init") {
    std::vector<InitKind> kinds;
    for (auto item : split_list(value)) kinds.push_back(parse_init_kind(item));
    if (kinds.empty()) bad_value(key, value);
    c.inits = std::move(kinds);
  } else if (key == "backend") {
    c.backend = parse_backend(value);
  } else if (key == "seed") {
    c.base_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "out") {
    c.out = std::string(value);
  } else if (key == "format") {
    c.format = parse_format(value);
  } else if (key == "store_iterates" || key == "store-iterates") {
    c.store_iterates = parse_bool(key, value);
  } else if (key == "diagnostics") {
    c.diagnostics = parse_bool(key, value);
  } else if (key == "risk_t") {
    c.risk_t = parse_number<int>(key, value);
  } else if (key == "workers") {
    c.workers = parse_number<unsigned>(key, value);
  } else if (key == "matvec_workers") {
    c.matvec_workers = parse_number<unsigned>(key, value);
  } else if (key == "power_iters") {
    c.power_iters = parse_number<int>(key, value);
  } else if (key == "spectral_scale") {
    c.spectral_scale = parse_number<double>(key, value);
  } else if (key == "sweep_n") {
    c.sweep_n.clear();
    for (auto item : split_list(value)) c.sweep_n.push_back(parse_number<std::size_t>(key, item));
  } else if (key == "sweep_lambda") {
    c.sweep_lambda.clear();
    for (auto item : split_list(value)) c.sweep_lambda.push_back(parse_number<double>(key, item));
  } else if (key == "preset") {
    apply_preset(c, find_preset(value));
  } else {
    throw Error(ErrorCategory::InvalidArgument, "unknown config key '" + key + "'");
  }
}

void load_config_file(ExperimentConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::Io, "cannot open config file " + path.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCategory::InvalidArgument,
                  path.string() + ":" + std::to_string(line_no) + ": expected key=value");
    try {
      apply_setting(config, view.substr(0, eq), view.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(e.category(), path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

}  // namespace z2amp
