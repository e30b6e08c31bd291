#include "qdquapi/propagator.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>
#include <string>

namespace qdquapi {

namespace {

using cd = std::complex<double>;

constexpr int kPairs = 16;

long power16(int rank) { return 1L << (4 * rank); }

int alpha_of(int x) { return x / 4; }
int beta_of(int x) { return x % 4; }

// Influence exponent between a newer slice x and an older slice y for coefficient eta.
cd action(int x, int y, cd eta) {
  const Eigen::Vector4d& n = occupancy();
  const double dn = n[alpha_of(x)] - n[beta_of(x)];
  return -dn * (eta * n[alpha_of(y)] - std::conj(eta) * n[beta_of(y)]);
}

Eigen::Matrix4cd exp_minus_i(const Eigen::Matrix4d& h, double dt) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(h);
  const Eigen::Vector4cd phases =
      (es.eigenvalues().cast<cd>() * cd(0.0, -dt)).array().exp().matrix();
  const Eigen::Matrix4cd v = es.eigenvectors().cast<cd>();
  return v * phases.asDiagonal() * v.adjoint();
}

}  // namespace

void SimGrid::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt", "grid.dt must be > 0");
  if (n_steps < 1) throw ConfigError("n_steps", "grid.n_steps must be >= 1");
  if (kmax < 1 || kmax > kMaxMemory)
    throw ConfigError("kmax", "grid.kmax must be in [1, " + std::to_string(kMaxMemory) +
                                  "] (16^kmax tensor ceiling)");
}

AugmentedTensor AugmentedTensor::initial(const DensityMatrix& rho0) {
  AugmentedTensor a;
  a.rank = 1;
  a.oldest_step = 0;
  a.data.resize(kPairs);
  for (int x = 0; x < kPairs; ++x) a.data[x] = rho0(alpha_of(x), beta_of(x));
  return a;
}

DensityMatrix AugmentedTensor::reduced() const {
  const long rest = static_cast<long>(data.size()) / kPairs;
  Eigen::Map<const Eigen::Matrix<cd, kPairs, Eigen::Dynamic>> m(data.data(), kPairs, rest);
  const Eigen::Matrix<cd, kPairs, 1> v = m.rowwise().sum();
  DensityMatrix rho;
  for (int x = 0; x < kPairs; ++x) rho(alpha_of(x), beta_of(x)) = v[x];
  return rho;
}

Eigen::Matrix4cd free_propagator(const HamiltonianParts& h, double dt) {
  return exp_minus_i(h.m, dt);
}

Eigen::Matrix4cd slice_propagator(const HamiltonianParts& h, double dt) {
  return exp_minus_i(h.full(), dt);
}

QuapiStepper::QuapiStepper(const Eigen::Matrix4cd& u, const MemoryKernel& kernel)
    : kmax_(kernel.kmax) {
  const Eigen::Vector4d& n = occupancy();
  for (int x = 0; x < kPairs; ++x) {
    for (int y = 0; y < kPairs; ++y)
      transfer_(x, y) = u(alpha_of(x), alpha_of(y)) * std::conj(u(beta_of(x), beta_of(y)));
    self_[x] = std::exp(action(x, x, kernel.eta_diag));
    const int na = static_cast<int>(n[alpha_of(x)]);
    const int nb = static_cast<int>(n[beta_of(x)]);
    class_of_[x] = 3 * na + nb;
    shift_of_[x] = na - nb + 2;
  }
  influence_.resize(static_cast<std::size_t>(kmax_));
  for (int s = 1; s <= kmax_; ++s) {
    Table& t = influence_[s - 1];
    for (int x = 0; x < kPairs; ++x)
      for (int y = 0; y < kPairs; ++y) t(x, y) = std::exp(action(x, y, kernel.eta(s)));
  }
  adjacent_initial_ = self_.matrix().asDiagonal() * transfer_;
  adjacent_ = adjacent_initial_.cwiseProduct(influence_[0]);

  // The weight only sees nα - nβ of the new slice and the occupancies of the old one, so
  // the oldest slice is summed per occupancy class before it meets the new slice.
  int old_rep[9];
  int new_rep[5];
  for (int x = 0; x < kPairs; ++x) {
    old_rep[class_of_[x]] = x;
    new_rep[shift_of_[x]] = x;
  }
  for (int c = 0; c < 5; ++c)
    for (int d = 0; d < 9; ++d)
      class_influence_(c, d) = influence_[kmax_ - 1](new_rep[c], old_rep[d]);
}

const QuapiStepper::Table* QuapiStepper::table_for(long point_step, long new_step) const {
  if (point_step == 0) return nullptr;
  return &influence_[static_cast<std::size_t>(new_step - point_step - 1)];
}

namespace {

using Column = Eigen::Array<cd, 16, 1>;
using Table = Eigen::Matrix<cd, 16, 16>;

// Walks the retained digits oldest to newest, carrying the product of influence columns
// for every value of the new slice, and writes out[idx * 16 + x_new] = coef * weight.
// The newest retained digit uses `adjacent`, which already folds in the transfer matrix.
// Accumulates the sum over all retained digits, i.e. the new reduced density matrix.
template <typename Coef>
void fill_digits(int depth, const std::vector<const Table*>& tables, const Table& adjacent,
                 long prefix, const Column& partial, const Coef& coef, cd* out, Column& total) {
  if (depth < static_cast<int>(tables.size())) {
    const Table* t = tables[static_cast<std::size_t>(depth)];
    for (int x = 0; x < kPairs; ++x) {
      const Column next = t ? Column(partial * t->col(x).array()) : partial;
      fill_digits(depth + 1, tables, adjacent, prefix * kPairs + x, next, coef, out, total);
    }
    return;
  }
  for (int x = 0; x < kPairs; ++x) {
    const long idx = prefix * kPairs + x;
    const Column v = coef(idx) * partial * adjacent.col(x).array();
    Eigen::Map<Column>(out + idx * kPairs) = v;
    total += v;
  }
}

template <typename Coef>
DensityMatrix fill(int depth, const std::vector<const Table*>& tables, const Table& adjacent,
                   long prefix, const Column& partial, const Coef& coef, cd* out) {
  Column total = Column::Zero();
  fill_digits(depth, tables, adjacent, prefix, partial, coef, out, total);
  DensityMatrix rho;
  for (int x = 0; x < kPairs; ++x) rho(alpha_of(x), beta_of(x)) = total[x];
  return rho;
}

}  // namespace

DensityMatrix QuapiStepper::grow(const AugmentedTensor& a, AugmentedTensor& out) const {
  const long new_step = a.newest_step() + 1;
  std::vector<const Table*> tables;
  for (int j = 0; j + 1 < a.rank; ++j) tables.push_back(table_for(a.oldest_step + j, new_step));
  const Table& adjacent = a.newest_step() == 0 ? adjacent_initial_ : adjacent_;

  out.rank = a.rank + 1;
  out.oldest_step = a.oldest_step;
  out.data.resize(static_cast<std::size_t>(power16(out.rank)));
  const cd* src = a.data.data();
  auto coef = [src](long idx) { return Column::Constant(src[idx]); };
  return fill(0, tables, adjacent, 0, Column::Ones(), coef, out.data.data());
}

DensityMatrix QuapiStepper::slide(const AugmentedTensor& a, AugmentedTensor& out) const {
  const long new_step = a.newest_step() + 1;
  const long rest = power16(a.rank - 1);
  std::vector<const Table*> tables;
  for (int j = 1; j + 1 < a.rank; ++j) tables.push_back(table_for(a.oldest_step + j, new_step));
  const Table& adjacent = a.newest_step() == 0 ? adjacent_initial_ : adjacent_;

  out.rank = a.rank;
  out.oldest_step = a.oldest_step + 1;
  out.data.resize(a.data.size());

  // Oldest slice is the most significant digit: old(idx, x) = data[x * rest + idx].
  const cd* old = a.data.data();
  const bool oldest_is_initial = a.oldest_step == 0;
  const auto& cls = class_of_;
  const auto& shift = shift_of_;
  const auto& weights = class_influence_;
  auto coef = [=, &cls, &shift, &weights](long idx) {
    Eigen::Matrix<cd, 9, 1> by_class = Eigen::Matrix<cd, 9, 1>::Zero();
    for (int x = 0; x < kPairs; ++x) by_class[cls[x]] += old[x * rest + idx];
    Column c;
    if (oldest_is_initial) {
      c.setConstant(by_class.sum());
    } else {
      const Eigen::Matrix<cd, 5, 1> w = weights * by_class;
      for (int x = 0; x < kPairs; ++x) c[x] = w[shift[x]];
    }
    return c;
  };
  return fill(0, tables, adjacent, 0, Column::Ones(), coef, out.data.data());
}

// kmax = 1: the slice being summed out is also the one the propagator acts on.
DensityMatrix QuapiStepper::slide_single(const AugmentedTensor& a, AugmentedTensor& out) const {
  const long new_step = a.newest_step() + 1;
  const Table* t = table_for(a.oldest_step, new_step);
  Eigen::Map<const Eigen::Matrix<cd, 16, 1>> old(a.data.data());
  Table kernel = transfer_;
  if (t) kernel = kernel.cwiseProduct(*t);
  out.rank = 1;
  out.oldest_step = a.oldest_step + 1;
  out.data.resize(kPairs);
  Eigen::Map<Eigen::Matrix<cd, 16, 1>> dst(out.data.data());
  dst = (self_ * (kernel * old).array()).matrix();
  return out.reduced();
}

DensityMatrix QuapiStepper::step_into(const AugmentedTensor& a, AugmentedTensor& out) const {
  if (a.rank < kmax_) return grow(a, out);
  if (a.rank == 1) return slide_single(a, out);
  return slide(a, out);
}

AugmentedTensor QuapiStepper::step(const AugmentedTensor& a) const {
  AugmentedTensor out;
  step_into(a, out);
  return out;
}

AugmentedTensor contract_step(const AugmentedTensor& a, const Eigen::Matrix4cd& u,
                              const MemoryKernel& kernel) {
  return QuapiStepper(u, kernel).step(a);
}

double linf(const DensityMatrix& a, const DensityMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

namespace {

TrajectoryRecord make_record(double t, const DensityMatrix& rho) {
  TrajectoryRecord r;
  r.t = t;
  r.rho = rho;
  r.trace_error = std::abs(rho.trace() - cd(1.0, 0.0));
  r.purity = (rho * rho).trace().real();
  return r;
}

}  // namespace

Trajectory propagate(const DensityMatrix& rho0, const HamiltonianParts& h,
                     const MemoryKernel& kernel, const SimGrid& grid, int stride) {
  grid.validate();
  if (stride < 1) throw ConfigError("stride", "output stride must be >= 1");
  if (kernel.kmax != grid.kmax)
    throw ConfigError("kmax", "kernel memory length does not match the grid");
  if (kernel.dt != grid.dt) throw ConfigError("dt", "kernel time step does not match the grid");

  const QuapiStepper stepper(slice_propagator(h, grid.dt), kernel);
  Trajectory traj;
  traj.records.reserve(static_cast<std::size_t>(grid.n_steps / stride + 1));
  traj.records.push_back(make_record(0.0, rho0));

  AugmentedTensor a = AugmentedTensor::initial(rho0);
  AugmentedTensor next;
  for (int n = 1; n <= grid.n_steps; ++n) {
    const DensityMatrix rho = stepper.step_into(a, next);
    std::swap(a, next);
    const TrajectoryRecord rec = make_record(n * grid.dt, rho);
    if (!(rec.trace_error <= kTraceDriftLimit)) {
      traj.records.push_back(rec);
      std::ostringstream msg;
      msg << "trace drift " << rec.trace_error << " exceeds " << kTraceDriftLimit
          << " at t = " << rec.t << " ps (step " << n << ")";
      throw PropagationAborted(msg.str(), std::move(traj));
    }
    if (n % stride == 0) traj.records.push_back(rec);
  }
  return traj;
}

ConvergenceReport convergence_report(const DensityMatrix& rho0, const HamiltonianParts& h,
                                     const BathSpec& bath, double dt, double horizon,
                                     const std::vector<int>& kmax_values, int base_kmax,
                                     int dt_halvings) {
  auto run = [&](double step, int kmax) {
    SimGrid grid;
    grid.dt = step;
    grid.kmax = kmax;
    grid.n_steps = static_cast<int>(std::lround(horizon / step));
    return propagate(rho0, h, memory_kernel(bath, step, kmax), grid);
  };
  // Compares a coarse run against a finer one sampled every `ratio` records.
  auto max_diff = [](const Trajectory& coarse, const Trajectory& fine, int ratio) {
    double worst = 0.0;
    for (std::size_t i = 0; i < coarse.records.size(); ++i) {
      const std::size_t j = i * static_cast<std::size_t>(ratio);
      if (j >= fine.records.size()) break;
      worst = std::max(worst, linf(coarse.records[i].rho, fine.records[j].rho));
    }
    return worst;
  };

  ConvergenceReport report;
  Trajectory previous;
  for (std::size_t i = 0; i < kmax_values.size(); ++i) {
    Trajectory current = run(dt, kmax_values[i]);
    if (i > 0) {
      report.memory.push_back({"kmax " + std::to_string(kmax_values[i - 1]) + "->" +
                                   std::to_string(kmax_values[i]),
                               max_diff(previous, current, 1)});
    }
    previous = std::move(current);
  }
  double step = dt;
  Trajectory coarse = run(step, base_kmax);
  for (int i = 0; i < dt_halvings; ++i) {
    Trajectory fine = run(step / 2.0, base_kmax);
    std::ostringstream label;
    label << "dt " << step << "->" << step / 2.0;
    report.step.push_back({label.str(), max_diff(coarse, fine, 2)});
    coarse = std::move(fine);
    step /= 2.0;
  }
  return report;
}

}  // namespace qdquapi
