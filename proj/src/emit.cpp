#include "z2amp/emit.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "z2amp/error.hpp"

namespace z2amp {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string optional_cell(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string();
}

json optional_json(const std::optional<double>& value) {
  return value ? json(*value) : json(nullptr);
}

fs::path with_suffix(const std::string& prefix, std::string_view suffix) {
  return fs::path(prefix + std::string(suffix));
}

void write_file(const fs::path& path, const std::string& body) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCategory::Io, "cannot open " + path.string() + " for writing");
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  out.flush();
  if (!out) throw Error(ErrorCategory::Io, "write failed for " + path.string());
}

std::string join_header(const std::vector<std::string_view>& columns) {
  std::string line;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) line += ',';
    line += columns[i];
  }
  return line + '\n';
}

std::string trajectory_csv(const ExperimentResult& result) {
  std::string body = join_header(trajectory_columns());
  for (const auto& row : result.rows) {
    const auto& r = row.record;
    body += to_string(row.init);
    body += ',' + std::to_string(row.run);
    body += ',' + std::to_string(r.t);
    for (double v : {r.alpha_oracle, r.alpha_plugin, r.correlation, r.pi, r.gamma, r.onsager})
      body += ',' + format_double(v);
    body += ',' + optional_cell(row.se_alpha);
    body += ',' + optional_cell(row.empirical_risk);
    body += '\n';
  }
  return body;
}

std::string aggregate_csv(const ExperimentResult& result) {
  std::string body = join_header(aggregate_columns());
  for (const auto& curve : result.curves) {
    for (std::size_t k = 0; k < curve.mean_corr.size(); ++k) {
      body += std::string(to_string(curve.init)) + ',' + std::to_string(k + 1) + ',' +
              format_double(curve.mean_corr[k]) + ',' + format_double(curve.sd_corr[k]) + '\n';
    }
  }
  return body;
}

std::string runs_csv(const ExperimentResult& result) {
  std::string body =
      "init_kind,run,model_seed,crossing,plateau_correlation,se_max_abs_log_ratio,"
      "risk_t,empirical_risk,predicted_risk\n";
  for (const auto& run : result.runs) {
    body += std::string(to_string(run.init)) + ',' + std::to_string(run.run) + ',' +
            std::to_string(run.model_seed) + ',' +
            (run.crossing ? std::to_string(*run.crossing) : std::string()) + ',' +
            format_double(run.plateau_correlation) + ',' + optional_cell(run.se_max_abs_log_ratio) +
            ',';
    if (run.risk) {
      body += std::to_string(run.risk->t) + ',' + format_double(run.risk->empirical_risk) + ',' +
              format_double(run.risk->predicted_risk);
    } else {
      body += ",,";
    }
    body += '\n';
  }
  return body;
}

json config_json(const ExperimentConfig& c) {
  json inits = json::array();
  for (InitKind k : c.inits) inits.push_back(to_string(k));
  return {{"n", c.n},
          {"lambda", c.lambda},
          {"seeds", c.n_seeds},
          {"tmax", c.t_max},
          {"init", inits},
          {"backend", to_string(c.backend)},
          {"seed", c.base_seed},
          {"power_iters", c.power_iters},
          {"spectral_scale", c.spectral_scale},
          {"store_iterates", c.store_iterates},
          {"risk_t", c.risk_t}};
}

json experiment_json(const ExperimentResult& result) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["config"] = config_json(result.config);
  doc["alpha_star"] = result.alpha_star;
  doc["predicted_risk"] = result.predicted_risk;

  json rows = json::array();
  for (const auto& row : result.rows) {
    const auto& r = row.record;
    rows.push_back({{"init_kind", to_string(row.init)},
                    {"run", row.run},
                    {"t", r.t},
                    {"alpha_oracle", r.alpha_oracle},
                    {"alpha_plugin", r.alpha_plugin},
                    {"correlation", r.correlation},
                    {"pi", r.pi},
                    {"gamma", r.gamma},
                    {"onsager", r.onsager},
                    {"se_alpha", optional_json(row.se_alpha)},
                    {"empirical_risk", optional_json(row.empirical_risk)}});
  }
  doc["trajectories"] = std::move(rows);

  json agg = json::array();
  for (const auto& curve : result.curves)
    for (std::size_t k = 0; k < curve.mean_corr.size(); ++k)
      agg.push_back({{"init_kind", to_string(curve.init)},
                     {"t", k + 1},
                     {"mean_corr", curve.mean_corr[k]},
                     {"sd_corr", curve.sd_corr[k]}});
  doc["aggregate"] = std::move(agg);

  json runs = json::array();
  for (const auto& run : result.runs) {
    json entry{{"init_kind", to_string(run.init)},
               {"run", run.run},
               {"model_seed", run.model_seed},
               {"crossing", run.crossing ? json(*run.crossing) : json(nullptr)},
               {"plateau_correlation", run.plateau_correlation},
               {"se_max_abs_log_ratio", optional_json(run.se_max_abs_log_ratio)}};
    if (run.risk) {
      entry["risk"] = {{"t", run.risk->t},
                       {"empirical_risk", run.risk->empirical_risk},
                       {"predicted_risk", run.risk->predicted_risk},
                       {"overlap", run.risk->overlap},
                       {"u_norm4", run.risk->u_norm4},
                       {"alpha_source", run.risk->alpha_source == AlphaSource::Plugin ? "plugin"
                                                                                      : "oracle"}};
    } else {
      entry["risk"] = nullptr;
    }
    runs.push_back(std::move(entry));
  }
  doc["runs"] = std::move(runs);
  return doc;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

template <class T>
T parse_cell(std::string_view cell, const fs::path& path, int line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty())
    throw Error(ErrorCategory::InvalidArgument,
                path.string() + ":" + std::to_string(line) + ": malformed cell '" +
                    std::string(cell) + "'");
  return value;
}

}  // namespace

const std::vector<std::string_view>& trajectory_columns() {
  static const std::vector<std::string_view> columns{
      "init_kind", "run",   "t",       "alpha_oracle", "alpha_plugin",  "correlation",
      "pi",        "gamma", "onsager", "se_alpha",     "empirical_risk"};
  return columns;
}

const std::vector<std::string_view>& aggregate_columns() {
  static const std::vector<std::string_view> columns{"init_kind", "t", "mean_corr", "sd_corr"};
  return columns;
}

std::string format_double(double value) {
  std::array<char, 32> buffer{};
  const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc{}) throw Error(ErrorCategory::Internal, "number formatting failed");
  return std::string(buffer.data(), ptr);
}

std::vector<fs::path> emit(const ExperimentResult& result, OutputFormat format,
                           const std::string& prefix) {
  if (result.rows.empty() || result.curves.empty())
    throw Error(ErrorCategory::InvalidArgument, "no results to emit");

  if (format == OutputFormat::Json) {
    const fs::path path = with_suffix(prefix, ".json");
    write_file(path, experiment_json(result).dump(1) + '\n');
    return {path};
  }
  // Render everything before touching the filesystem.
  const std::array<std::pair<fs::path, std::string>, 3> files{{
      {with_suffix(prefix, "_trajectories.csv"), trajectory_csv(result)},
      {with_suffix(prefix, "_aggregate.csv"), aggregate_csv(result)},
      {with_suffix(prefix, "_runs.csv"), runs_csv(result)},
  }};
  std::vector<fs::path> written;
  for (const auto& [path, body] : files) {
    write_file(path, body);
    written.push_back(path);
  }
  return written;
}

std::vector<fs::path> emit_sweep(const std::vector<SweepRow>& rows, OutputFormat format,
                                 const std::string& prefix) {
  if (rows.empty()) throw Error(ErrorCategory::InvalidArgument, "no sweep rows to emit");
  if (format == OutputFormat::Json) {
    json doc{{"schema_version", kSchemaVersion}};
    json cells = json::array();
    for (const auto& r : rows)
      cells.push_back({{"n", r.n},
                       {"lambda", r.lambda},
                       {"init_kind", to_string(r.init)},
                       {"runs", r.runs},
                       {"crossed", r.crossed},
                       {"median_crossing", optional_json(r.median_crossing)},
                       {"plateau_correlation", r.plateau_correlation},
                       {"empirical_risk", optional_json(r.empirical_risk)},
                       {"predicted_risk", r.predicted_risk},
                       {"alpha_star", r.alpha_star}});
    doc["sweep"] = std::move(cells);
    const fs::path path = with_suffix(prefix, "_sweep.json");
    write_file(path, doc.dump(1) + '\n');
    return {path};
  }
  std::string body =
      "n,lambda,init_kind,runs,crossed,median_crossing,plateau_correlation,empirical_risk,"
      "predicted_risk,alpha_star\n";
  for (const auto& r : rows) {
    body += std::to_string(r.n) + ',' + format_double(r.lambda) + ',' +
            std::string(to_string(r.init)) + ',' + std::to_string(r.runs) + ',' +
            std::to_string(r.crossed) + ',' + optional_cell(r.median_crossing) + ',' +
            format_double(r.plateau_correlation) + ',' + optional_cell(r.empirical_risk) + ',' +
            format_double(r.predicted_risk) + ',' + format_double(r.alpha_star) + '\n';
  }
  const fs::path path = with_suffix(prefix, "_sweep.csv");
  write_file(path, body);
  return {path};
}

std::vector<fs::path> emit_diagnostics(const DiagnosticReport& report, OutputFormat format,
                                       const std::string& prefix) {
  if (report.gaussianity.empty())
    throw Error(ErrorCategory::InvalidArgument, "no diagnostics to emit");
  if (format == OutputFormat::Json) {
    json doc{{"schema_version", kSchemaVersion}, {"gram_window", report.gram_window}};
    json per_t = json::array();
    for (const auto& g : report.gaussianity)
      per_t.push_back({{"t", g.t},
                       {"alpha", g.alpha},
                       {"residual_norm", g.residual_norm},
                       {"excess_kurtosis", g.excess_kurtosis},
                       {"scaled_max", g.scaled_max}});
    doc["gaussianity"] = std::move(per_t);
    doc["gram_eigenvalues"] = report.gram_eigenvalues;
    const fs::path path = with_suffix(prefix, "_diagnose.json");
    write_file(path, doc.dump(1) + '\n');
    return {path};
  }
  std::string body = "t,alpha,residual_norm,excess_kurtosis,scaled_max\n";
  for (const auto& g : report.gaussianity)
    body += std::to_string(g.t) + ',' + format_double(g.alpha) + ',' +
            format_double(g.residual_norm) + ',' + format_double(g.excess_kurtosis) + ',' +
            format_double(g.scaled_max) + '\n';
  std::string gram = "index,eigenvalue\n";
  for (std::size_t k = 0; k < report.gram_eigenvalues.size(); ++k)
    gram += std::to_string(k + 1) + ',' + format_double(report.gram_eigenvalues[k]) + '\n';

  const fs::path gauss_path = with_suffix(prefix, "_gaussianity.csv");
  const fs::path gram_path = with_suffix(prefix, "_gram.csv");
  write_file(gauss_path, body);
  write_file(gram_path, gram);
  return {gauss_path, gram_path};
}

std::string se_table_csv(const std::vector<SeTableRow>& rows) {
  std::string body = "lambda,alpha_star,asymptotic_risk,sub_resolution\n";
  for (const auto& r : rows)
    body += format_double(r.lambda) + ',' + format_double(r.alpha_star) + ',' +
            format_double(r.asymptotic_risk) + ',' + (r.sub_resolution ? "1" : "0") + '\n';
  return body;
}

std::vector<fs::path> emit_se_table(const std::vector<SeTableRow>& rows, OutputFormat format,
                                    const std::string& prefix) {
  if (rows.empty()) throw Error(ErrorCategory::InvalidArgument, "no state-evolution rows to emit");
  if (format == OutputFormat::Json) {
    json doc{{"schema_version", kSchemaVersion}};
    json table = json::array();
    for (const auto& r : rows)
      table.push_back({{"lambda", r.lambda},
                       {"alpha_star", r.alpha_star},
                       {"asymptotic_risk", r.asymptotic_risk},
                       {"sub_resolution", r.sub_resolution}});
    doc["se"] = std::move(table);
    const fs::path path = with_suffix(prefix, "_se.json");
    write_file(path, doc.dump(1) + '\n');
    return {path};
  }
  const fs::path path = with_suffix(prefix, "_se.csv");
  write_file(path, se_table_csv(rows));
  return {path};
}

std::vector<TrajectoryRow> read_trajectory_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::Io, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line + '\n' != join_header(trajectory_columns()))
    throw Error(ErrorCategory::InvalidArgument, path.string() + ": unexpected header");

  std::vector<TrajectoryRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != trajectory_columns().size())
      throw Error(ErrorCategory::InvalidArgument,
                  path.string() + ":" + std::to_string(line_no) + ": wrong column count");
    TrajectoryRow row;
    row.init = parse_init_kind(cells[0]);
    row.run = parse_cell<int>(cells[1], path, line_no);
    row.record.t = parse_cell<int>(cells[2], path, line_no);
    row.record.alpha_oracle = parse_cell<double>(cells[3], path, line_no);
    row.record.alpha_plugin = parse_cell<double>(cells[4], path, line_no);
    row.record.correlation = parse_cell<double>(cells[5], path, line_no);
    row.record.pi = parse_cell<double>(cells[6], path, line_no);
    row.record.gamma = parse_cell<double>(cells[7], path, line_no);
    row.record.onsager = parse_cell<double>(cells[8], path, line_no);
    if (!cells[9].empty()) row.se_alpha = parse_cell<double>(cells[9], path, line_no);
    if (!cells[10].empty()) row.empirical_risk = parse_cell<double>(cells[10], path, line_no);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace z2amp
