#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdquapi/entanglement.hpp"
#include "qdquapi/model.hpp"
#include "qdquapi/propagator.hpp"

namespace qdquapi {

struct InitialState {
  StandardState kind = StandardState::kE3;
  double lambda = 0.0;                       // werner weight
  std::optional<DensityMatrix> explicit_rho;  // set when state = explicit

  DensityMatrix matrix() const;
  bool operator==(const InitialState&) const;
};

/// A fully resolved run. `geometry`, `field` and `material` record where derived values
/// came from; `system` and `bath` always hold the numbers actually simulated.
struct RunConfig {
  SystemParams system;
  std::optional<DotGeometry> geometry;
  std::optional<double> field;  // kV/cm
  BathSpec bath;
  std::optional<MaterialSpec> material;
  SimGrid grid;
  InitialState initial;
  std::string output_path = "trajectory.csv";
  int stride = 1;

  /// Human-readable lines for every derived physical quantity.
  std::vector<std::string> derived_summary() const;

  /// Same physics, grid, initial state and output.
  bool same_run(const RunConfig& other) const;
};

/// Parses the INI-style document with sections [system], [bath], [grid], [initial] and
/// an optional [output]. Throws ConfigError naming the offending key or sections.
RunConfig load_config(std::string_view text);
RunConfig load_config_file(const std::filesystem::path& path);

/// Explicit-form document that loads back into an identical run.
std::string to_text(const RunConfig& config);

/// Explicit density matrices must be Hermitian, unit trace, and positive within tolerance.
void validate_state(const DensityMatrix& rho);

}  // namespace qdquapi
