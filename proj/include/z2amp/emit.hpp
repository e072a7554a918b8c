#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "z2amp/config.hpp"
#include "z2amp/harness.hpp"

namespace z2amp {

inline constexpr int kSchemaVersion = 1;

// Trajectory CSV header, in order. The first column keys the init kind; the
// remaining ten are the per-record columns. Column semantics:
//   alpha_oracle   lambda v*^T eta_t(x_t), i.e. alpha_{t+1}
//   alpha_plugin   +-pi_{t+1}/sqrt(n)
//   se_alpha       alpha*_{t+1} from the SE recursion seeded at the crossing
//                  time; blank before it
//   empirical_risk ||v* v*^T - u_t u_t^T||_F^2 with plug-in alpha; blank
//                  unless iterates were stored
const std::vector<std::string_view>& trajectory_columns();
const std::vector<std::string_view>& aggregate_columns();

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

// Writes <prefix>_trajectories.csv, <prefix>_aggregate.csv and
// <prefix>_runs.csv, or <prefix>.json. Returns the paths written. Throws
// InvalidArgument (nothing written) for empty results and Io on write errors.
std::vector<std::filesystem::path> emit(const ExperimentResult& result, OutputFormat format,
                                        const std::string& prefix);

std::vector<std::filesystem::path> emit_sweep(const std::vector<SweepRow>& rows,
                                              OutputFormat format, const std::string& prefix);

std::vector<std::filesystem::path> emit_diagnostics(const DiagnosticReport& report,
                                                    OutputFormat format,
                                                    const std::string& prefix);

std::vector<std::filesystem::path> emit_se_table(const std::vector<SeTableRow>& rows,
                                                 OutputFormat format, const std::string& prefix);

std::string se_table_csv(const std::vector<SeTableRow>& rows);

// Parses a trajectory CSV written by emit().
std::vector<TrajectoryRow> read_trajectory_csv(const std::filesystem::path& path);

}  // namespace z2amp
