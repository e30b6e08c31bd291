#include "qdquapi/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "qdquapi/errors.hpp"
#include "qdquapi/units.hpp"

namespace qdquapi {

namespace pt = boost::property_tree;

namespace {

constexpr double kDefaultHorizonPs = 1000.0;

double parse_number(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  while (first < last && std::isspace(static_cast<unsigned char>(*first))) ++first;
  while (last > first && std::isspace(static_cast<unsigned char>(last[-1]))) --last;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ConfigError(key, "key '" + key + "': not a finite number: '" + text + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const double v = parse_number(key, text);
  if (v != std::floor(v) || std::abs(v) > 2e9)
    throw ConfigError(key, "key '" + key + "': expected an integer, got '" + text + "'");
  return static_cast<int>(v);
}

class Section {
 public:
  Section(std::string name, const pt::ptree& tree) : name_(std::move(name)), tree_(tree) {
    for (const auto& [key, child] : tree_) {
      if (!child.empty()) throw ConfigError(key, "[" + name_ + "] " + key + ": nested value");
    }
  }

  bool has(const std::string& key) const { return tree_.find(key) != tree_.not_found(); }

  std::string text(const std::string& key) const {
    used_.insert(key);
    const auto it = tree_.find(key);
    if (it == tree_.not_found())
      throw ConfigError(key, "[" + name_ + "] missing required key '" + key + "'");
    return it->second.data();
  }

  double number(const std::string& key) const { return parse_number(key, text(key)); }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  int integer(const std::string& key) const { return parse_int(key, text(key)); }

  void forbid(const std::string& key, const std::string& reason) const {
    if (has(key)) throw ConfigError(key, "[" + name_ + "] key '" + key + "' " + reason);
  }

  void reject_unknown() const {
    for (const auto& [key, child] : tree_) {
      if (!used_.count(key))
        throw ConfigError(key, "[" + name_ + "] unknown key '" + key + "'");
    }
  }

 private:
  std::string name_;
  const pt::ptree& tree_;
  mutable std::set<std::string> used_;
};

template <typename F>
void checked(const std::string& key, F&& f) {
  try {
    f();
  } catch (const DomainError& e) {
    throw ConfigError(key, "[" + key + "] " + e.what());
  }
}

void load_system(const Section& s, RunConfig& cfg) {
  const bool explicit_mode = s.has("j12");
  const bool geometry_mode = s.has("mu") || s.has("eps_r") || s.has("l");
  if (explicit_mode && geometry_mode)
    throw ConfigError("j12", "[system] give either j12 or the geometry (mu, eps_r, l), not both");
  if (!explicit_mode && !geometry_mode)
    throw ConfigError("j12", "[system] missing required key 'j12' (or geometry mu, eps_r, l)");

  cfg.system.delta1 = s.number_or("delta1", 0.0);
  cfg.system.delta2 = s.number_or("delta2", 0.0);
  if (explicit_mode) {
    s.forbid("field", "needs the geometry form (mu)");
    s.forbid("d", "needs the geometry form (mu)");
    cfg.system.j12 = s.number("j12");
    cfg.system.k1 = s.number("k1");
    cfg.system.k2 = s.number("k2");
  } else {
    DotGeometry g;
    g.mu = s.number("mu");
    g.eps_r = s.number("eps_r");
    g.l = s.number("l");
    g.d = s.number("d");
    checked("system", [&] { cfg.system.j12 = dipole_coupling(g); });
    cfg.geometry = g;
    if (s.has("field")) {
      s.forbid("k1", "conflicts with 'field'");
      s.forbid("k2", "conflicts with 'field'");
      const double field = s.number("field");
      checked("field", [&] { cfg.system.k1 = cfg.system.k2 = rabi_from_field(g.mu, field); });
      cfg.field = field;
    } else {
      cfg.system.k1 = s.number_or("k1", 0.0);
      cfg.system.k2 = s.number_or("k2", 0.0);
    }
  }
  checked("system", [&] { cfg.system.validate(); });
}

void load_bath(const Section& s, RunConfig& cfg) {
  const bool explicit_mode = s.has("alpha") || s.has("omega_c");
  const bool material_mode = s.has("u") || s.has("mass_density");
  if (explicit_mode && material_mode)
    throw ConfigError("alpha", "[bath] give either alpha/omega_c or material constants, not both");
  const double temperature = s.number("temperature");
  if (material_mode) {
    MaterialSpec m;
    m.u = s.number("u");
    m.mass_density = s.number("mass_density");
    m.d_e = s.number("d_e");
    m.d_h = s.number("d_h");
    m.d = s.has("d") ? s.number("d") : (cfg.geometry ? cfg.geometry->d : s.number("d"));
    checked("bath", [&] { cfg.bath = material_to_bath(m, temperature); });
    cfg.material = m;
  } else {
    cfg.bath.alpha = s.number("alpha");
    cfg.bath.omega_c = s.number("omega_c");
    cfg.bath.temperature = temperature;
    checked("bath", [&] { cfg.bath.validate(); });
  }
}

void load_grid(const Section& s, RunConfig& cfg) {
  cfg.grid.dt = s.number("dt");
  cfg.grid.kmax = s.integer("kmax");
  if (s.has("n_steps")) {
    cfg.grid.n_steps = s.integer("n_steps");
  } else if (cfg.grid.dt > 0.0) {
    cfg.grid.n_steps = static_cast<int>(std::lround(kDefaultHorizonPs / cfg.grid.dt));
  }
  cfg.grid.validate();
}

DensityMatrix parse_matrix(const std::string& text) {
  std::istringstream is(text);
  std::vector<double> values;
  std::string token;
  while (is >> token) values.push_back(parse_number("matrix", token));
  if (values.size() != 32)
    throw ConfigError("matrix", "[initial] matrix needs 32 numbers (re im pairs, row-major), got " +
                                    std::to_string(values.size()));
  DensityMatrix rho;
  for (int i = 0; i < 16; ++i) rho(i / 4, i % 4) = {values[2 * i], values[2 * i + 1]};
  return rho;
}

void load_initial(const Section& s, RunConfig& cfg) {
  const std::string name = s.text("state");
  if (name == "explicit") {
    s.forbid("lambda", "only applies to state = werner");
    DensityMatrix rho = parse_matrix(s.text("matrix"));
    try {
      validate_state(rho);
    } catch (const InvalidStateError& e) {
      throw ConfigError("matrix", std::string("[initial] matrix: ") + e.what());
    }
    cfg.initial.explicit_rho = rho;
    return;
  }
  try {
    cfg.initial.kind = parse_standard_state(name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("state", std::string("[initial] ") + e.what());
  }
  s.forbid("matrix", "only applies to state = explicit");
  if (cfg.initial.kind == StandardState::kWerner) {
    cfg.initial.lambda = s.number("lambda");
    if (!(cfg.initial.lambda >= 0.0 && cfg.initial.lambda <= 1.0))
      throw ConfigError("lambda", "[initial] lambda must be in [0, 1]");
  } else {
    s.forbid("lambda", "only applies to state = werner");
  }
}

void load_output(const Section& s, RunConfig& cfg) {
  if (s.has("path")) cfg.output_path = s.text("path");
  if (s.has("stride")) cfg.stride = s.integer("stride");
  if (cfg.stride < 1) throw ConfigError("stride", "[output] stride must be >= 1");
}

// Shortest text that reads back to the same double.
std::string shortest(double v) { return fmt::format("{}", v); }

}  // namespace

DensityMatrix InitialState::matrix() const {
  if (explicit_rho) return *explicit_rho;
  return standard_state(kind, lambda);
}

bool InitialState::operator==(const InitialState& o) const {
  if (explicit_rho.has_value() != o.explicit_rho.has_value()) return false;
  if (explicit_rho) return *explicit_rho == *o.explicit_rho;
  return kind == o.kind && lambda == o.lambda;
}

void validate_state(const DensityMatrix& rho) {
  if (!rho.allFinite()) throw InvalidStateError("density matrix has non-finite entries");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw InvalidStateError("density matrix is not Hermitian");
  if (std::abs(rho.trace() - std::complex<double>(1.0, 0.0)) > 1e-9)
    throw InvalidStateError("density matrix trace is not 1");
  clip_state(rho);
}

RunConfig load_config(std::string_view text) {
  pt::ptree tree;
  std::istringstream is{std::string(text)};
  try {
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", std::string("config syntax: ") + e.what());
  }

  static const std::vector<std::string> required = {"system", "bath", "grid", "initial"};
  std::vector<std::string> missing;
  for (const auto& name : required)
    if (tree.find(name) == tree.not_found()) missing.push_back(name);
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "[" : ", [") + m + "]";
    throw ConfigError(missing.front(), "missing sections: " + list);
  }
  for (const auto& [key, child] : tree) {
    if (key != "system" && key != "bath" && key != "grid" && key != "initial" && key != "output")
      throw ConfigError(key, "unknown section or top-level key '" + key + "'");
  }

  RunConfig cfg;
  const Section system("system", tree.get_child("system"));
  const Section bath("bath", tree.get_child("bath"));
  const Section grid("grid", tree.get_child("grid"));
  const Section initial("initial", tree.get_child("initial"));
  load_system(system, cfg);
  load_bath(bath, cfg);
  load_grid(grid, cfg);
  load_initial(initial, cfg);
  system.reject_unknown();
  bath.reject_unknown();
  grid.reject_unknown();
  initial.reject_unknown();
  if (auto out = tree.get_child_optional("output")) {
    const Section output("output", *out);
    load_output(output, cfg);
    output.reject_unknown();
  }
  return cfg;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_config(buffer.str());
}

std::string to_text(const RunConfig& c) {
  std::string out;
  auto line = [&out](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
  out += "[system]\n";
  line("delta1", shortest(c.system.delta1));
  line("delta2", shortest(c.system.delta2));
  line("k1", shortest(c.system.k1));
  line("k2", shortest(c.system.k2));
  line("j12", shortest(c.system.j12));
  out += "[bath]\n";
  line("alpha", shortest(c.bath.alpha));
  line("omega_c", shortest(c.bath.omega_c));
  line("temperature", shortest(c.bath.temperature));
  out += "[grid]\n";
  line("dt", shortest(c.grid.dt));
  line("n_steps", std::to_string(c.grid.n_steps));
  line("kmax", std::to_string(c.grid.kmax));
  out += "[initial]\n";
  if (c.initial.explicit_rho) {
    line("state", "explicit");
    std::string m;
    for (int i = 0; i < 16; ++i) {
      const auto z = (*c.initial.explicit_rho)(i / 4, i % 4);
      m += (i ? " " : "") + shortest(z.real()) + " " + shortest(z.imag());
    }
    line("matrix", m);
  } else {
    line("state", to_string(c.initial.kind));
    if (c.initial.kind == StandardState::kWerner) line("lambda", shortest(c.initial.lambda));
  }
  out += "[output]\n";
  line("path", c.output_path);
  line("stride", std::to_string(c.stride));
  return out;
}

std::vector<std::string> RunConfig::derived_summary() const {
  std::vector<std::string> lines;
  if (geometry) {
    lines.push_back(fmt::format("j12 = {:.6g} ps^-1 from mu = {} D, eps_r = {}, l = {} nm",
                                system.j12, geometry->mu, geometry->eps_r, geometry->l));
  }
  if (field) {
    lines.push_back(fmt::format("k1 = k2 = {:.6g} ps^-1 from field = {} kV/cm", system.k1, *field));
  }
  if (material) {
    lines.push_back(fmt::format(
        "alpha = {:.6g} ps^2, omega_c = {:.6g} ps^-1 from u = {} cm/s, rho = {} g/cm^3, "
        "D_e = {} eV, D_h = {} eV, d = {} nm",
        bath.alpha, bath.omega_c, material->u, material->mass_density, material->d_e,
        material->d_h, material->d));
  }
  lines.push_back(fmt::format("k_B T / hbar = {:.6g} ps^-1 at T = {} K",
                              units::thermal_frequency(bath.temperature), bath.temperature));
  lines.push_back(fmt::format("memory window = {} x {} ps = {} ps", grid.kmax, grid.dt,
                              grid.kmax * grid.dt));
  return lines;
}

bool RunConfig::same_run(const RunConfig& o) const {
  return system == o.system && bath == o.bath && grid == o.grid && initial == o.initial &&
         output_path == o.output_path && stride == o.stride;
}

}  // namespace qdquapi
