#include "qdquapi/runner.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "qdquapi/entanglement.hpp"
#include "qdquapi/errors.hpp"

namespace qdquapi {

namespace {

std::string num(double v) { return fmt::format("{:.15e}", v); }

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("path", "cannot write " + path.string());
  return out;
}

std::vector<std::string> echo_lines(const RunConfig& config) {
  std::vector<std::string> lines;
  std::string text = to_text(config);
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    lines.push_back(text.substr(start, end - start));
    start = end == std::string::npos ? text.size() : end + 1;
  }
  for (const auto& d : config.derived_summary()) lines.push_back("; " + d);
  return lines;
}

}  // namespace

const std::vector<std::string>& trajectory_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c{"t_ps"};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        c.push_back(fmt::format("rho_re_{}{}", i, j));
        c.push_back(fmt::format("rho_im_{}{}", i, j));
      }
    for (int k = 0; k < 4; ++k) c.push_back(fmt::format("magic_d{}", k));
    for (const char* s : {"concurrence", "eof", "purity", "trace_err"}) c.emplace_back(s);
    return c;
  }();
  return cols;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<std::string>& comments) {
  for (const auto& c : comments) os << "# " << c << '\n';
  const auto& cols = trajectory_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  std::string row;
  for (const auto& rec : traj.records) {
    EntanglementReport<double> ent;
    try {
      ent = entanglement(rec.rho);
    } catch (const InvalidStateError& e) {
      os << "# ABORTED: t = " << num(rec.t) << " ps: " << e.what() << '\n';
      throw NumericError(std::string("invalid state during output: ") + e.what());
    }
    const DensityMatrix magic = to_magic_basis(rec.rho);
    row = num(rec.t);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        row += ',' + num(rec.rho(i, j).real());
        row += ',' + num(rec.rho(i, j).imag());
      }
    for (int k = 0; k < 4; ++k) row += ',' + num(magic(k, k).real());
    row += ',' + num(ent.concurrence);
    row += ',' + num(ent.eof);
    row += ',' + num(rec.purity);
    row += ',' + num(rec.trace_error);
    os << row << '\n';
  }
}

RunSummary summarize(const Trajectory& traj) {
  RunSummary s;
  if (traj.records.empty()) return s;
  const TrajectoryRecord& last = traj.records.back();
  s.final_t = last.t;
  const DensityMatrix magic = to_magic_basis(last.rho);
  for (int k = 0; k < 4; ++k) s.final_magic_diagonal[k] = magic(k, k).real();
  for (const auto& r : traj.records) s.max_trace_error = std::max(s.max_trace_error, r.trace_error);
  s.final_eof = eof(last.rho);
  return s;
}

RunSummary run(const RunConfig& config, const std::filesystem::path& csv_path,
               const std::optional<MemoryKernel>& kernel) {
  const MemoryKernel k = kernel ? *kernel : memory_kernel(config.bath, config.grid.dt, config.grid.kmax);
  if (kernel && !(kernel->bath == config.bath))
    throw ConfigError("kernel", "cached kernel was built for a different bath");
  const HamiltonianParts h = build_hamiltonian(config.system);
  const std::vector<std::string> echo = echo_lines(config);

  std::ofstream out = open_output(csv_path);
  Trajectory traj;
  try {
    traj = propagate(config.initial.matrix(), h, k, config.grid, config.stride);
  } catch (const PropagationAborted& e) {
    try {
      write_trajectory_csv(out, e.partial(), echo);
    } catch (const NumericError&) {
    }
    out << "# ABORTED: " << e.what() << '\n';
    throw;
  }
  write_trajectory_csv(out, traj, echo);
  return summarize(traj);
}

SweepParameter parse_sweep_parameter(const std::string& name) {
  if (name == "temperature") return SweepParameter::kTemperature;
  if (name == "j12") return SweepParameter::kJ12;
  if (name == "kmax") return SweepParameter::kKmax;
  if (name == "dt") return SweepParameter::kDt;
  if (name == "werner_lambda") return SweepParameter::kWernerLambda;
  throw ConfigError("param", "unknown sweep parameter '" + name + "'");
}

std::string to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::kTemperature: return "temperature";
    case SweepParameter::kJ12: return "j12";
    case SweepParameter::kKmax: return "kmax";
    case SweepParameter::kDt: return "dt";
    case SweepParameter::kWernerLambda: return "werner_lambda";
  }
  return "?";
}

RunConfig apply_sweep_value(const RunConfig& config, SweepParameter p, double value) {
  RunConfig c = config;
  try {
    switch (p) {
      case SweepParameter::kTemperature:
        c.bath.temperature = value;
        c.bath.validate();
        break;
      case SweepParameter::kJ12:
        c.system.j12 = value;
        c.geometry.reset();
        c.system.validate();
        break;
      case SweepParameter::kKmax:
        if (value != std::floor(value)) throw ConfigError("kmax", "kmax values must be integers");
        c.grid.kmax = static_cast<int>(value);
        break;
      case SweepParameter::kDt: {
        const double horizon = config.grid.dt * config.grid.n_steps;
        c.grid.dt = value;
        if (value > 0.0) c.grid.n_steps = static_cast<int>(std::lround(horizon / value));
        break;
      }
      case SweepParameter::kWernerLambda:
        c.initial = InitialState{};
        c.initial.kind = StandardState::kWerner;
        if (!(value >= 0.0 && value <= 1.0))
          throw ConfigError("values", "werner_lambda must be in [0, 1]");
        c.initial.lambda = value;
        break;
    }
  } catch (const DomainError& e) {
    throw ConfigError("values", std::string("sweep value: ") + e.what());
  }
  c.grid.validate();
  return c;
}

std::vector<SweepPoint> sweep(const RunConfig& config, const SweepSpec& spec,
                              const std::filesystem::path& out_dir, unsigned jobs) {
  if (spec.values.empty()) throw ConfigError("values", "sweep needs at least one value");
  std::vector<RunConfig> configs;
  for (double v : spec.values) configs.push_back(apply_sweep_value(config, spec.parameter, v));

  std::vector<SweepPoint> points(spec.values.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    points[i].value = spec.values[i];
    points[i].csv = out_dir / fmt::format("{}_{:03d}_{}.csv", to_string(spec.parameter), i,
                                          fmt::format("{:g}", spec.values[i]));
  }
  auto job = [&](std::size_t i) {
    try {
      points[i].summary = run(configs[i], points[i].csv);
    } catch (const std::exception& e) {
      points[i].summary.status = e.what();
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < points.size(); start += jobs) {
    std::vector<std::future<void>> batch;
    for (std::size_t i = start; i < std::min(points.size(), start + jobs); ++i)
      batch.push_back(std::async(std::launch::async, job, i));
    for (auto& f : batch) f.get();
  }

  std::ofstream summary = open_output(out_dir / "summary.csv");
  write_sweep_summary(summary, spec.parameter, points);
  return points;
}

void write_sweep_summary(std::ostream& os, SweepParameter p, const std::vector<SweepPoint>& points) {
  os << to_string(p)
     << ",final_t_ps,final_eof,magic_d0,magic_d1,magic_d2,magic_d3,max_trace_err,status,csv\n";
  for (const auto& pt : points) {
    const RunSummary& s = pt.summary;
    std::string status = s.status;
    std::replace(status.begin(), status.end(), ',', ';');
    os << num(pt.value) << ',' << num(s.final_t) << ',' << num(s.final_eof);
    for (double d : s.final_magic_diagonal) os << ',' << num(d);
    os << ',' << num(s.max_trace_error) << ',' << status << ',' << pt.csv.filename().string()
       << '\n';
  }
}

void write_convergence_report(std::ostream& os, const ConvergenceReport& report) {
  os << "kind,refinement,max_linf\n";
  for (const auto& e : report.memory) os << "kmax," << e.label << ',' << num(e.max_linf) << '\n';
  for (const auto& e : report.step) os << "dt," << e.label << ',' << num(e.max_linf) << '\n';
}

}  // namespace qdquapi
