#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include "qdquapi/model.hpp"

namespace qdquapi {

using Complex = std::complex<double>;

/// Frequency quadrature control. The grid over [0, 8 omega_c] starts at `min_intervals`
/// and is doubled until successive Simpson estimates agree to `tolerance` relative.
struct QuadratureOptions {
  int min_intervals = 2048;
  int max_intervals = 1 << 22;
  double tolerance = 1e-13;
  double failure_threshold = 1e-9;  // worse than this at max_intervals -> NumericError
};

/// C(t) = (1/pi) int_0^inf J(w) [coth(w / 2kT) cos(wt) - i sin(wt)] dw, in ps^-2.
Complex bath_correlation(const BathSpec& bath, double t, const QuadratureOptions& opts = {});

/// lambda = (1/pi) int_0^inf J(w) / w dw.
double reorganization_energy(const BathSpec& bath, const QuadratureOptions& opts = {});

/// Discretized influence coefficients for slices of width dt.
///
/// Slice k covers ((k-1) dt, k dt]. For k > k' the coefficient is the double integral of
/// C(t - t') with t in slice k and t' in slice k'; it depends only on k - k'. The diagonal
/// coefficient is the same integral restricted to t > t' within one slice.
struct MemoryKernel {
  double dt = 0.0;
  int kmax = 0;
  BathSpec bath;
  Complex eta_diag;
  std::vector<Complex> eta_off;  // eta_off[s - 1] for separation s = 1..kmax

  /// Coefficient for separation s in [0, kmax].
  Complex eta(int separation) const;

  bool operator==(const MemoryKernel&) const = default;
};

MemoryKernel memory_kernel(const BathSpec& bath, double dt, int kmax,
                           const QuadratureOptions& opts = {});

/// Coefficient between absolute slices k >= k' >= 1, integrated over the actual window
/// edges rather than through the separation table.
Complex eta_between(const BathSpec& bath, double dt, int k, int kp,
                    const QuadratureOptions& opts = {});

/// Versioned text cache of a kernel. Values are stored as hex floats so reading back
/// reproduces the table bit for bit.
void write_kernel(std::ostream& os, const MemoryKernel& kernel);
MemoryKernel read_kernel(std::istream& is);

}  // namespace qdquapi
