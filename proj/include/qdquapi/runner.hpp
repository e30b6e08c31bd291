#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qdquapi/config.hpp"
#include "qdquapi/propagator.hpp"

namespace qdquapi {

/// Trajectory CSV column names in file order.
const std::vector<std::string>& trajectory_columns();

/// Writes `# `-prefixed echo lines, the header, and one row per record.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<std::string>& comments);

struct RunSummary {
  double final_t = 0.0;
  double final_eof = 0.0;
  std::array<double, 4> final_magic_diagonal{};
  double max_trace_error = 0.0;
  std::string status = "ok";  // "ok" or the abort diagnostic
};

RunSummary summarize(const Trajectory& traj);

/// Propagates `config` and writes the trajectory CSV to `csv_path`. On a numeric abort
/// the partial trajectory is still written with a trailing `# ABORTED:` comment and the
/// exception is rethrown. An optional kernel skips the frequency quadrature.
RunSummary run(const RunConfig& config, const std::filesystem::path& csv_path,
               const std::optional<MemoryKernel>& kernel = std::nullopt);

enum class SweepParameter { kTemperature, kJ12, kKmax, kDt, kWernerLambda };

SweepParameter parse_sweep_parameter(const std::string& name);
std::string to_string(SweepParameter p);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::kTemperature;
  std::vector<double> values;
};

/// `config` with one parameter replaced. Changing dt keeps the physical horizon.
RunConfig apply_sweep_value(const RunConfig& config, SweepParameter p, double value);

struct SweepPoint {
  double value = 0.0;
  std::filesystem::path csv;
  RunSummary summary;
};

/// One trajectory CSV per value plus `summary.csv` in `out_dir`. Points run
/// concurrently up to `jobs`; a failed point is recorded and the rest proceed.
std::vector<SweepPoint> sweep(const RunConfig& config, const SweepSpec& spec,
                              const std::filesystem::path& out_dir, unsigned jobs = 0);

void write_sweep_summary(std::ostream& os, SweepParameter p, const std::vector<SweepPoint>& points);

void write_convergence_report(std::ostream& os, const ConvergenceReport& report);

}  // namespace qdquapi
