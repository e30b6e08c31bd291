#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qdquapi/errors.hpp"
#include "qdquapi/influence.hpp"
#include "qdquapi/model.hpp"

namespace qdquapi {

struct SimGrid {
  static constexpr int kMaxMemory = 8;  // 16^8 amplitudes is the largest tensor we allocate

  double dt = 0.25;
  int n_steps = 4000;
  int kmax = 5;

  void validate() const;  // throws ConfigError
  bool operator==(const SimGrid&) const = default;
};

/// Path amplitudes over the last `rank` slices. Each slice index runs over the 16
/// forward/backward pairs x = 4 * alpha + beta; the oldest slice is the most significant
/// digit of the flat index. `oldest_step` is the path step of the oldest slice; step 0 is
/// the initial state and carries no bath window.
struct AugmentedTensor {
  int rank = 1;
  long oldest_step = 0;
  std::vector<std::complex<double>> data;

  static AugmentedTensor initial(const DensityMatrix& rho0);
  long newest_step() const { return oldest_step + rank - 1; }
  /// Sum over all but the newest slice.
  DensityMatrix reduced() const;
};

struct TrajectoryRecord {
  double t = 0.0;
  DensityMatrix rho;
  double trace_error = 0.0;
  double purity = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
};

/// Thrown when the trace drifts past tolerance. Carries everything recorded so far.
class PropagationAborted : public NumericError {
 public:
  PropagationAborted(const std::string& what, Trajectory partial)
      : NumericError(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  Trajectory partial_;
};

inline constexpr double kTraceDriftLimit = 1e-3;

/// exp(-i dt M), the off-diagonal rotation.
Eigen::Matrix4cd free_propagator(const HamiltonianParts& h, double dt);

/// exp(-i dt (M + diag(Omega))), the per-slice system propagator used by `propagate`.
Eigen::Matrix4cd slice_propagator(const HamiltonianParts& h, double dt);

/// Precomputed per-slice tables for a fixed propagator and kernel.
class QuapiStepper {
 public:
  QuapiStepper(const Eigen::Matrix4cd& u, const MemoryKernel& kernel);

  /// Append one slice, apply all influence weights to the retained slices, then sum
  /// out the oldest once more than kmax slices would be held.
  AugmentedTensor step(const AugmentedTensor& a) const;

  /// Same as `step`, writing into `out` and reusing its storage. Returns the reduced
  /// density matrix of the result, accumulated during the contraction.
  DensityMatrix step_into(const AugmentedTensor& a, AugmentedTensor& out) const;

  int kmax() const { return kmax_; }

 private:
  using Table = Eigen::Matrix<std::complex<double>, 16, 16>;
  using Column = Eigen::Array<std::complex<double>, 16, 1>;

  int kmax_;
  Table transfer_;               // (x_new, x_old) = U(a_new, a_old) conj(U(b_new, b_old))
  Column self_;                  // exp(S) of the newest slice with itself
  std::vector<Table> influence_; // influence_[s - 1](x_new, x_old) at separation s
  Table adjacent_;               // transfer, self and separation-1 weights combined
  Table adjacent_initial_;       // the same when the previous slice is the initial state
  // Weights at separation kmax by (nα - nβ of the new slice, occupancy class of the old).
  Eigen::Matrix<std::complex<double>, 5, 9> class_influence_;
  std::array<int, 16> class_of_{};  // 3 nα + nβ
  std::array<int, 16> shift_of_{};  // nα - nβ + 2

  DensityMatrix grow(const AugmentedTensor& a, AugmentedTensor& out) const;
  DensityMatrix slide(const AugmentedTensor& a, AugmentedTensor& out) const;
  DensityMatrix slide_single(const AugmentedTensor& a, AugmentedTensor& out) const;
  const Table* table_for(long point_step, long new_step) const;
};

AugmentedTensor contract_step(const AugmentedTensor& a, const Eigen::Matrix4cd& u,
                              const MemoryKernel& kernel);

/// Finite-memory path sum from rho0 over grid.n_steps slices. Records every `stride`
/// steps, starting at t = 0.
Trajectory propagate(const DensityMatrix& rho0, const HamiltonianParts& h,
                     const MemoryKernel& kernel, const SimGrid& grid, int stride = 1);

struct ConvergenceReport {
  struct Entry {
    std::string label;  // e.g. "kmax 3->4" or "dt 0.25->0.125"
    double max_linf = 0.0;
  };
  std::vector<Entry> memory;  // successive kmax refinements
  std::vector<Entry> step;    // successive dt halvings
};

/// Max-over-time L-infinity differences between successive kmax values (at the base dt)
/// and between dt and dt/2 (at the base kmax), over a common horizon.
ConvergenceReport convergence_report(const DensityMatrix& rho0, const HamiltonianParts& h,
                                     const BathSpec& bath, double dt, double horizon,
                                     const std::vector<int>& kmax_values, int base_kmax,
                                     int dt_halvings = 1);

double linf(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace qdquapi
