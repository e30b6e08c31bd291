#pragma once

#include <Eigen/Core>

namespace qdquapi {

/// Reduced density matrix over (00, X0, 0X, XX).
using DensityMatrix = Eigen::Matrix4cd;

// Two-dot product basis, in this order throughout the library.
enum BasisState : int { kGround = 0, kX0 = 1, k0X = 2, kXX = 3 };

/// Rotating-frame system parameters, ps^-1.
struct SystemParams {
  double delta1 = 0.0;
  double delta2 = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double j12 = 0.0;

  void validate() const;
  bool operator==(const SystemParams&) const = default;
};

struct DotGeometry {
  double mu = 0.0;     // transition dipole, Debye
  double eps_r = 1.0;  // relative permittivity
  double l = 1.0;      // interdot distance, nm
  double d = 1.0;      // carrier localization length, nm

  void validate() const;
  bool operator==(const DotGeometry&) const = default;
};

/// Superohmic bath J(w) = alpha w^3 exp(-(w/omega_c)^2) at a given temperature.
struct BathSpec {
  double alpha = 0.0;        // ps^2
  double omega_c = 1.0;      // ps^-1
  double temperature = 1.0;  // K

  void validate() const;
  double beta() const;  // 1 / (k_B T) in ps
  bool operator==(const BathSpec&) const = default;
};

/// Deformation-potential material constants.
struct MaterialSpec {
  double u = 0.0;             // sound speed, cm/s
  double mass_density = 0.0;  // g/cm^3
  double d_e = 0.0;           // eV
  double d_h = 0.0;           // eV
  double d = 0.0;             // localization length, nm

  void validate() const;
  bool operator==(const MaterialSpec&) const = default;
};

struct HamiltonianParts {
  Eigen::Matrix4d m;      // off-diagonal generator
  Eigen::Vector4d omega;  // diagonal energies
  Eigen::Vector4d occupancy;

  /// Full rotating-frame system Hamiltonian m + diag(omega).
  Eigen::Matrix4d full() const;
};

/// Exciton count of each basis state, (0, 1, 1, 2).
const Eigen::Vector4d& occupancy();

/// Dipole-dipole exchange mu^2 / (4 pi eps0 eps_r L^3) / hbar in ps^-1.
double dipole_coupling(const DotGeometry& geom);

/// Rabi coupling mu E / hbar in ps^-1 for a field given in kV/cm.
double rabi_from_field(double mu_debye, double field_kv_per_cm);

HamiltonianParts build_hamiltonian(const SystemParams& p);

double spectral_density(const BathSpec& bath, double omega);

BathSpec material_to_bath(const MaterialSpec& mat, double temperature);

}  // namespace qdquapi
