#include "qdquapi/model.hpp"

#include <cmath>
#include <string>

#include "qdquapi/errors.hpp"
#include "qdquapi/units.hpp"

namespace qdquapi {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void SystemParams::validate() const {
  require(finite(delta1) && finite(delta2) && finite(k1) && finite(k2) && finite(j12),
          "system parameters must be finite");
  require(j12 >= 0.0, "j12 must be non-negative");
}

void DotGeometry::validate() const {
  require(finite(mu) && mu >= 0.0, "mu must be >= 0");
  require(finite(eps_r) && eps_r >= 1.0, "eps_r must be >= 1");
  require(finite(l) && l > 0.0, "l must be > 0");
  require(finite(d) && d > 0.0, "d must be > 0");
}

void BathSpec::validate() const {
  require(finite(alpha) && alpha >= 0.0, "alpha must be >= 0");
  require(finite(omega_c) && omega_c > 0.0, "omega_c must be > 0");
  require(finite(temperature) && temperature > 0.0, "temperature must be > 0");
}

double BathSpec::beta() const { return 1.0 / units::thermal_frequency(temperature); }

void MaterialSpec::validate() const {
  require(finite(u) && u > 0.0, "u must be > 0");
  require(finite(mass_density) && mass_density > 0.0, "mass_density must be > 0");
  require(finite(d_e) && finite(d_h), "deformation potentials must be finite");
  require(finite(d) && d > 0.0, "d must be > 0");
}

Eigen::Matrix4d HamiltonianParts::full() const {
  Eigen::Matrix4d h = m;
  h.diagonal() += omega;
  return h;
}

const Eigen::Vector4d& occupancy() {
  static const Eigen::Vector4d n(0.0, 1.0, 1.0, 2.0);
  return n;
}

double dipole_coupling(const DotGeometry& geom) {
  geom.validate();
  const double mu = geom.mu * units::kDebye;
  const double l = geom.l * 1e-9;
  const double energy =
      mu * mu / (4.0 * units::kPi * units::kVacuumPermittivity * geom.eps_r * l * l * l);
  const double j = units::joules_to_inverse_ps(energy);
  if (!std::isfinite(j)) throw DomainError("dipole coupling overflowed");
  return j;
}

double rabi_from_field(double mu_debye, double field_kv_per_cm) {
  require(finite(mu_debye) && mu_debye >= 0.0, "mu must be >= 0");
  require(finite(field_kv_per_cm) && field_kv_per_cm >= 0.0, "field must be >= 0");
  const double field = field_kv_per_cm * 1e5;  // V/m
  return units::joules_to_inverse_ps(mu_debye * units::kDebye * field);
}

HamiltonianParts build_hamiltonian(const SystemParams& p) {
  p.validate();
  HamiltonianParts h;
  const double a = 0.5 * p.k1;
  const double b = 0.5 * p.k2;
  // clang-format off
  h.m << 0.0, a,     b,     0.0,
         a,   0.0,   p.j12, b,
         b,   p.j12, 0.0,   a,
         0.0, b,     a,     0.0;
  // clang-format on
  h.omega << 0.0, p.delta1, p.delta2, p.delta1 + p.delta2;
  h.occupancy = occupancy();
  return h;
}

double spectral_density(const BathSpec& bath, double omega) {
  if (!(omega >= 0.0)) throw DomainError("spectral density needs omega >= 0");
  const double x = omega / bath.omega_c;
  return bath.alpha * omega * omega * omega * std::exp(-x * x);
}

BathSpec material_to_bath(const MaterialSpec& mat, double temperature) {
  mat.validate();
  const double u = mat.u * 1e-2;                  // m/s
  const double rho = mat.mass_density * 1e3;      // kg/m^3
  const double dd = (mat.d_h - mat.d_e) * units::kElementaryCharge;  // J
  const double d = mat.d * 1e-9;                  // m
  const double alpha_si = dd * dd / (4.0 * units::kPi * units::kPi * rho * units::kHbar *
                                     std::pow(u, 5));  // s^2
  BathSpec bath;
  bath.alpha = alpha_si * units::kSecondSquaredToPsSquared;
  bath.omega_c = std::sqrt(2.0) * u / d * units::kPerSecondToPerPs;
  bath.temperature = temperature;
  bath.validate();
  return bath;
}

}  // namespace qdquapi
