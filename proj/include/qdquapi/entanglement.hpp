#pragma once

// Two-dot entanglement: magic basis, Wootters concurrence, entanglement of formation.
//
// All functions take any 4x4 complex Eigen expression over the product basis
// (00, X0, 0X, XX); the dot-1 excitation is the low bit of the basis index.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qdquapi/errors.hpp"

namespace qdquapi {

template <typename T>
using Matrix4c = Eigen::Matrix<std::complex<T>, 4, 4>;
template <typename T>
using Vector4r = Eigen::Matrix<T, 4, 1>;

/// Negative eigenvalues of rho above this magnitude make a state invalid.
inline constexpr double kNegativeEigenvalueTolerance = 1e-8;

/// Columns are the magic-basis vectors e1..e4 expressed in the product basis.
template <typename T = double>
Matrix4c<T> magic_basis() {
  using C = std::complex<T>;
  const T r = T(1) / std::sqrt(T(2));
  const C i(0, 1);
  Matrix4c<T> e = Matrix4c<T>::Zero();
  // e1 = (XX + 00)/sqrt2, e2 = i(XX - 00)/sqrt2, e3 = i(X0 + 0X)/sqrt2, e4 = (X0 - 0X)/sqrt2
  e(0, 0) = r;       e(3, 0) = r;
  e(0, 1) = -i * r;  e(3, 1) = i * r;
  e(1, 2) = i * r;   e(2, 2) = i * r;
  e(1, 3) = r;       e(2, 3) = -r;
  return e;
}

/// rho_magic(i, j) = <e_i| rho |e_j>.
template <typename Derived>
Matrix4c<typename Derived::RealScalar> to_magic_basis(const Eigen::MatrixBase<Derived>& rho) {
  using T = typename Derived::RealScalar;
  const Matrix4c<T> e = magic_basis<T>();
  return e.adjoint() * rho * e;
}

template <typename Derived>
Matrix4c<typename Derived::RealScalar> from_magic_basis(const Eigen::MatrixBase<Derived>& rho) {
  using T = typename Derived::RealScalar;
  const Matrix4c<T> e = magic_basis<T>();
  return e * rho * e.adjoint();
}

/// sigma_y x sigma_y, which is real: antidiagonal (-1, 1, 1, -1).
template <typename T = double>
Matrix4c<T> sigma_yy() {
  Matrix4c<T> yy = Matrix4c<T>::Zero();
  yy(0, 3) = -1;
  yy(1, 2) = 1;
  yy(2, 1) = 1;
  yy(3, 0) = -1;
  return yy;
}

/// (sigma_y x sigma_y) rho^* (sigma_y x sigma_y).
template <typename Derived>
Matrix4c<typename Derived::RealScalar> spin_flip(const Eigen::MatrixBase<Derived>& rho) {
  using T = typename Derived::RealScalar;
  const Matrix4c<T> yy = sigma_yy<T>();
  return yy * rho.conjugate() * yy;
}

/// Hermitian part of rho with eigenvalues in [-tol, 0) clipped to zero.
/// Throws InvalidStateError for anything more negative.
template <typename Derived>
Matrix4c<typename Derived::RealScalar> clip_state(const Eigen::MatrixBase<Derived>& rho) {
  using T = typename Derived::RealScalar;
  const Matrix4c<T> herm = (rho + rho.adjoint()) / T(2);
  Eigen::SelfAdjointEigenSolver<Matrix4c<T>> es(herm);
  Vector4r<T> w = es.eigenvalues();
  if (w.minCoeff() < -T(kNegativeEigenvalueTolerance))
    throw InvalidStateError("density matrix has eigenvalue " + std::to_string(double(w.minCoeff())));
  w = w.cwiseMax(T(0));
  return es.eigenvectors() * w.template cast<std::complex<T>>().asDiagonal() *
         es.eigenvectors().adjoint();
}

/// Square roots of the eigenvalues of rho * spin_flip(rho), descending.
///
/// With rho = W W^dagger these are the singular values of the symmetric matrix
/// tau = W^T (sigma_y x sigma_y) W, which keeps the small ones accurate to rounding
/// instead of to its square root.
template <typename Derived>
Vector4r<typename Derived::RealScalar> wootters_lambdas(const Eigen::MatrixBase<Derived>& rho) {
  using T = typename Derived::RealScalar;
  const Matrix4c<T> herm = (rho + rho.adjoint()) / T(2);
  Eigen::SelfAdjointEigenSolver<Matrix4c<T>> es(herm);
  if (es.eigenvalues().minCoeff() < -T(kNegativeEigenvalueTolerance))
    throw InvalidStateError("density matrix has eigenvalue " +
                            std::to_string(double(es.eigenvalues().minCoeff())));
  const Vector4r<T> root = es.eigenvalues().cwiseMax(T(0)).cwiseSqrt();
  const Matrix4c<T> w = es.eigenvectors() * root.template cast<std::complex<T>>().asDiagonal();
  const Matrix4c<T> tau = w.transpose() * sigma_yy<T>() * w;
  Eigen::JacobiSVD<Matrix4c<T>> svd(tau);
  Vector4r<T> lambdas = svd.singularValues();
  std::sort(lambdas.data(), lambdas.data() + 4, std::greater<T>());
  return lambdas;
}

template <typename Derived>
Matrix4c<typename Derived::RealScalar> psd_sqrt(const Eigen::MatrixBase<Derived>& m) {
  using T = typename Derived::RealScalar;
  const Matrix4c<T> herm = (m + m.adjoint()) / T(2);
  Eigen::SelfAdjointEigenSolver<Matrix4c<T>> es(herm);
  const Vector4r<T> s = es.eigenvalues().cwiseMax(T(0)).cwiseSqrt();
  return es.eigenvectors() * s.template cast<std::complex<T>>().asDiagonal() *
         es.eigenvectors().adjoint();
}

/// Eigenvalues of R = sqrt(sqrt(rho) rho~ sqrt(rho)), descending. Same spectrum as
/// `wootters_lambdas`, through nested Hermitian square roots. Square roots amplify
/// rounding near zero eigenvalues, so this route runs in extended precision.
template <typename Derived>
Vector4r<typename Derived::RealScalar> r_matrix_lambdas(const Eigen::MatrixBase<Derived>& rho) {
  using T = typename Derived::RealScalar;
  using W = long double;
  const Matrix4c<W> r = clip_state(Matrix4c<W>(rho.template cast<std::complex<W>>()));
  const Matrix4c<W> s = psd_sqrt(r);
  const Matrix4c<W> inner = s * spin_flip(r) * s;
  const Matrix4c<W> big_r = psd_sqrt(inner);
  Eigen::SelfAdjointEigenSolver<Matrix4c<W>> es((big_r + big_r.adjoint()) / W(2), false);
  Vector4r<T> lambdas = es.eigenvalues().cwiseMax(W(0)).template cast<T>();
  std::sort(lambdas.data(), lambdas.data() + 4, std::greater<T>());
  return lambdas;
}

template <typename T>
T concurrence_from_lambdas(const Vector4r<T>& l) {
  return std::clamp(l[0] - l[1] - l[2] - l[3], T(0), T(1));
}

template <typename Derived>
typename Derived::RealScalar concurrence(const Eigen::MatrixBase<Derived>& rho) {
  return concurrence_from_lambdas(wootters_lambdas(rho));
}

/// H(x) = -x log2 x - (1 - x) log2(1 - x), with H(0) = H(1) = 0.
template <typename T>
T binary_entropy(T x) {
  auto term = [](T p) { return p > T(0) ? -p * std::log2(p) : T(0); };
  return term(x) + term(T(1) - x);
}

template <typename T>
T eof_from_concurrence(T c) {
  c = std::clamp(c, T(0), T(1));
  return std::clamp(binary_entropy(T(0.5) + T(0.5) * std::sqrt(T(1) - c * c)), T(0), T(1));
}

template <typename Derived>
typename Derived::RealScalar eof(const Eigen::MatrixBase<Derived>& rho) {
  return eof_from_concurrence(concurrence(rho));
}

template <typename T>
struct EntanglementReport {
  Vector4r<T> lambdas;
  T concurrence;
  T eof;
};

template <typename Derived>
EntanglementReport<typename Derived::RealScalar> entanglement(
    const Eigen::MatrixBase<Derived>& rho) {
  using T = typename Derived::RealScalar;
  EntanglementReport<T> r;
  r.lambdas = wootters_lambdas(rho);
  r.concurrence = concurrence_from_lambdas(r.lambdas);
  r.eof = eof_from_concurrence(r.concurrence);
  return r;
}

enum class StandardState { kE1, kE2, kE3, kE4, kGround, kMixed, kWerner };

/// Parses "e1".."e4", "ground", "mixed", "werner"; throws std::invalid_argument.
StandardState parse_standard_state(const std::string& name);
std::string to_string(StandardState s);

/// Pure Bell states, |00><00|, I/4, or werner(lambda) = lambda |e4><e4| + (1 - lambda) I/4.
template <typename T = double>
Matrix4c<T> standard_state(StandardState which, T lambda = T(0)) {
  const Matrix4c<T> e = magic_basis<T>();
  auto projector = [&](int k) -> Matrix4c<T> { return e.col(k) * e.col(k).adjoint(); };
  switch (which) {
    case StandardState::kE1: return projector(0);
    case StandardState::kE2: return projector(1);
    case StandardState::kE3: return projector(2);
    case StandardState::kE4: return projector(3);
    case StandardState::kGround: {
      Matrix4c<T> g = Matrix4c<T>::Zero();
      g(0, 0) = 1;
      return g;
    }
    case StandardState::kMixed: return Matrix4c<T>::Identity() / T(4);
    case StandardState::kWerner:
      if (!(lambda >= T(0) && lambda <= T(1)))
        throw DomainError("werner lambda must be in [0, 1]");
      return lambda * projector(3) + (T(1) - lambda) / T(4) * Matrix4c<T>::Identity();
  }
  throw DomainError("unknown standard state");
}

}  // namespace qdquapi
