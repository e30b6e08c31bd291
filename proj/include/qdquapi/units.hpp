#pragma once

// Internal units: hbar = 1, time in ps, energies and frequencies in ps^-1.
// Everything physical is converted at the boundary through the constants below.

namespace qdquapi::units {

// CODATA 2018 (exact where the SI defines them).
inline constexpr double kHbar = 1.054571817e-34;          // J s
inline constexpr double kBoltzmann = 1.380649e-23;        // J / K
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F / m
inline constexpr double kSpeedOfLight = 299792458.0;      // m / s
inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double kDebye = 1e-21 / kSpeedOfLight;   // C m
inline constexpr double kPerSecondToPerPs = 1e-12;
inline constexpr double kSecondSquaredToPsSquared = 1e24;

/// k_B / hbar in ps^-1 per kelvin (~0.13092). Single source for temperature conversion.
inline constexpr double kKelvinToInversePs = kBoltzmann / kHbar * kPerSecondToPerPs;

inline constexpr double thermal_frequency(double kelvin) { return kelvin * kKelvinToInversePs; }

/// Energy in joules to angular frequency in ps^-1.
inline constexpr double joules_to_inverse_ps(double joules) {
  return joules / kHbar * kPerSecondToPerPs;
}

}  // namespace qdquapi::units
