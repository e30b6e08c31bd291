// qdquapi: command-line front end for the two-dot QUAPI simulator.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qdquapi/config.hpp"
#include "qdquapi/errors.hpp"
#include "qdquapi/influence.hpp"
#include "qdquapi/runner.hpp"

namespace fs = std::filesystem;
using namespace qdquapi;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

RunConfig load_and_echo(const std::string& path) {
  RunConfig cfg = load_config_file(path);
  for (const auto& line : cfg.derived_summary()) std::cout << "derived: " << line << '\n';
  return cfg;
}

fs::path csv_target(const RunConfig& cfg, const std::string& out_dir) {
  const fs::path p(cfg.output_path);
  return out_dir.empty() ? p : fs::path(out_dir) / p.filename();
}

void print_summary(const RunSummary& s) {
  std::cout << "final t = " << s.final_t << " ps, eof = " << s.final_eof << ", magic diagonal = ("
            << s.final_magic_diagonal[0] << ", " << s.final_magic_diagonal[1] << ", "
            << s.final_magic_diagonal[2] << ", " << s.final_magic_diagonal[3]
            << "), max trace error = " << s.max_trace_error << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduced dynamics of two dipole-coupled quantum dots in a common phonon bath"};
  app.require_subcommand(1);

  std::string config_path, out_dir, kernel_path, param, values_text, kmax_text = "3,4,5,6";
  double horizon = 200.0;
  int halvings = 1;
  unsigned jobs = 0;

  auto* run_cmd = app.add_subcommand("run", "Propagate one configuration to a trajectory CSV");
  run_cmd->add_option("--config", config_path, "Config file")->required();
  run_cmd->add_option("--out", out_dir, "Output directory (default: [output] path as given)");
  run_cmd->add_option("--kernel", kernel_path, "Memory-kernel cache written by kernel-cache");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run one trajectory per parameter value");
  sweep_cmd->add_option("--config", config_path, "Config file")->required();
  sweep_cmd->add_option("--out", out_dir, "Output directory")->required();
  sweep_cmd->add_option("--param", param, "temperature | j12 | kmax | dt | werner_lambda")
      ->required();
  sweep_cmd->add_option("--values", values_text, "Comma-separated values")->required();
  sweep_cmd->add_option("--jobs", jobs, "Concurrent runs (default: hardware threads)");

  auto* conv_cmd = app.add_subcommand("converge", "Memory-length and time-step convergence");
  conv_cmd->add_option("--config", config_path, "Config file")->required();
  conv_cmd->add_option("--out", out_dir, "Output directory")->required();
  conv_cmd->add_option("--kmax", kmax_text, "Comma-separated memory lengths");
  conv_cmd->add_option("--horizon", horizon, "Physical time compared, ps");
  conv_cmd->add_option("--halvings", halvings, "Number of dt halvings");

  auto* cache_cmd = app.add_subcommand("kernel-cache", "Write the memory kernel table");
  cache_cmd->add_option("--config", config_path, "Config file")->required();
  cache_cmd->add_option("--out", out_dir, "Kernel file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  auto parse_list = [](const std::string& text, const std::string& key) {
    std::vector<double> out;
    std::string token;
    std::istringstream is(text);
    while (std::getline(is, token, ',')) {
      try {
        std::size_t pos = 0;
        out.push_back(std::stod(token, &pos));
        if (pos != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw ConfigError(key, "--" + key + ": bad number '" + token + "'");
      }
    }
    return out;
  };

  try {
    if (*run_cmd) {
      const RunConfig cfg = load_and_echo(config_path);
      std::optional<MemoryKernel> kernel;
      if (!kernel_path.empty()) {
        std::ifstream in(kernel_path);
        if (!in) throw ConfigError("kernel", "cannot read " + kernel_path);
        kernel = read_kernel(in);
      }
      const fs::path target = csv_target(cfg, out_dir);
      print_summary(run(cfg, target, kernel));
      std::cout << "wrote " << target.string() << '\n';
    } else if (*sweep_cmd) {
      const RunConfig cfg = load_and_echo(config_path);
      SweepSpec spec{parse_sweep_parameter(param), parse_list(values_text, "values")};
      const auto points = sweep(cfg, spec, out_dir, jobs);
      int failures = 0;
      for (const auto& p : points) {
        std::cout << to_string(spec.parameter) << " = " << p.value << ": " << p.summary.status
                  << ", final eof = " << p.summary.final_eof << '\n';
        failures += p.summary.status != "ok";
      }
      std::cout << "wrote " << (fs::path(out_dir) / "summary.csv").string() << '\n';
      if (failures) return kExitNumeric;
    } else if (*conv_cmd) {
      const RunConfig cfg = load_and_echo(config_path);
      std::vector<int> kmax_values;
      for (double k : parse_list(kmax_text, "kmax")) kmax_values.push_back(static_cast<int>(k));
      for (int k : kmax_values) {
        SimGrid g = cfg.grid;
        g.kmax = k;
        g.validate();
      }
      const ConvergenceReport report =
          convergence_report(cfg.initial.matrix(), build_hamiltonian(cfg.system), cfg.bath,
                             cfg.grid.dt, horizon, kmax_values, cfg.grid.kmax, halvings);
      fs::create_directories(out_dir);
      std::ofstream out(fs::path(out_dir) / "convergence.csv");
      write_convergence_report(out, report);
      write_convergence_report(std::cout, report);
    } else if (*cache_cmd) {
      const RunConfig cfg = load_and_echo(config_path);
      const MemoryKernel k = memory_kernel(cfg.bath, cfg.grid.dt, cfg.grid.kmax);
      const fs::path target(out_dir);
      if (target.has_parent_path()) fs::create_directories(target.parent_path());
      std::ofstream out(target);
      if (!out) throw ConfigError("out", "cannot write " + out_dir);
      write_kernel(out, k);
      std::cout << "wrote " << target.string() << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "numeric abort: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const InvalidStateError& e) {
    std::cerr << "numeric abort: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
