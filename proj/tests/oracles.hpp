#pragma once

// Independent reference implementations used only by the tests. They share no code with
// the library: Gauss-Legendre panels instead of adaptive Simpson, explicit path sums
// instead of tensor contraction.

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qdquapi/model.hpp"

namespace oracle {

using cd = std::complex<double>;

struct Rule {
  std::vector<double> x, w;  // on [-1, 1]
};

inline Rule gauss_legendre(int n) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.x[i] = x;
    r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

// Composite Gauss-Legendre over [a, b].
template <class F>
auto integrate(const F& f, double a, double b, int panels = 400, int order = 10) {
  static const Rule rule = gauss_legendre(10);
  const Rule& r = order == 10 ? rule : gauss_legendre(order);
  const double h = (b - a) / panels;
  decltype(f(a)) sum{};
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < r.x.size(); ++i) sum += r.w[i] * 0.5 * h * f(mid + 0.5 * h * r.x[i]);
  }
  return sum;
}

struct Spectrum {
  std::vector<double> w, weight;  // quadrature nodes, and weights times J / pi
};

// Nodes of the frequency integral, so C(t) for many t reuses the same J evaluations.
inline Spectrum spectrum(const qdquapi::BathSpec& bath) {
  Spectrum s;
  const Rule r = gauss_legendre(10);
  const int panels = 600;
  const double top = 10.0 * bath.omega_c;
  const double h = top / panels;
  for (int p = 0; p < panels; ++p) {
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      const double w = (p + 0.5) * h + 0.5 * h * r.x[i];
      const double j = bath.alpha * w * w * w * std::exp(-(w / bath.omega_c) * (w / bath.omega_c));
      s.w.push_back(w);
      s.weight.push_back(r.w[i] * 0.5 * h * j / std::numbers::pi);
    }
  }
  return s;
}

// C(t) = (1/pi) int J(w) [coth(beta w / 2) cos(wt) - i sin(wt)] dw with beta in ps.
inline cd correlation(const qdquapi::BathSpec& bath, double beta, double t) {
  const Spectrum s = spectrum(bath);
  cd sum = 0.0;
  for (std::size_t i = 0; i < s.w.size(); ++i) {
    const double w = s.w[i];
    sum += s.weight[i] * cd(std::cos(w * t) / std::tanh(0.5 * beta * w), -std::sin(w * t));
  }
  return sum;
}

// Double integral of C(t - t') over t in slice k and t' in slice kp (k > kp), or over
// t' < t within one slice when k == kp. Slice k covers ((k-1) dt, k dt].
inline cd eta(const qdquapi::BathSpec& bath, double beta, double dt, int k, int kp) {
  const Spectrum s = spectrum(bath);
  const Rule r = gauss_legendre(24);
  cd sum = 0.0;
  for (std::size_t a = 0; a < r.x.size(); ++a) {
    const double t = (k - 1) * dt + 0.5 * dt * (1.0 + r.x[a]);
    for (std::size_t b = 0; b < r.x.size(); ++b) {
      double tp, weight;
      if (k == kp) {  // t' in ((k-1) dt, t)
        const double span = t - (k - 1) * dt;
        tp = (k - 1) * dt + 0.5 * span * (1.0 + r.x[b]);
        weight = 0.25 * dt * span * r.w[a] * r.w[b];
      } else {
        tp = (kp - 1) * dt + 0.5 * dt * (1.0 + r.x[b]);
        weight = 0.25 * dt * dt * r.w[a] * r.w[b];
      }
      const double tau = t - tp;
      cd c = 0.0;
      for (std::size_t i = 0; i < s.w.size(); ++i) {
        const double w = s.w[i];
        c += s.weight[i] * cd(std::cos(w * tau) / std::tanh(0.5 * beta * w), -std::sin(w * tau));
      }
      sum += weight * c;
    }
  }
  return sum;
}

inline Eigen::Matrix4cd expm_hermitian(const Eigen::Matrix4cd& h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
  Eigen::Vector4cd phase;
  for (int i = 0; i < 4; ++i) phase[i] = std::exp(cd(0.0, -t * es.eigenvalues()[i]));
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

// Explicit sum over every forward/backward path of n slices after the initial point.
// Pairs of slices further apart than kmax carry no influence; the initial point carries none.
// `eta(s)` supplies the coefficient at separation s.
template <class Eta>
Eigen::Matrix4cd path_sum(const Eigen::Matrix4cd& rho0, const Eigen::Matrix4cd& u, int n,
                          int kmax, const Eta& eta) {
  const double occ[4] = {0, 1, 1, 2};
  auto action = [&](int x, int y, cd e) {
    const double dn = occ[x / 4] - occ[x % 4];
    return -dn * (e * occ[y / 4] - std::conj(e) * occ[y % 4]);
  };
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  std::vector<int> path(n + 1, 0);
  long total = 1;
  for (int i = 0; i <= n; ++i) total *= 16;
  for (long code = 0; code < total; ++code) {
    long c = code;
    for (int i = n; i >= 0; --i) {
      path[i] = static_cast<int>(c % 16);
      c /= 16;
    }
    cd amp = rho0(path[0] / 4, path[0] % 4);
    if (amp == 0.0) continue;
    cd exponent = 0.0;
    for (int k = 1; k <= n; ++k) {
      const int x = path[k], y = path[k - 1];
      amp *= u(x / 4, y / 4) * std::conj(u(x % 4, y % 4));
      for (int kp = std::max(1, k - kmax); kp <= k; ++kp) exponent += action(x, path[kp], eta(k - kp));
    }
    rho(path[n] / 4, path[n] % 4) += amp * std::exp(exponent);
  }
  return rho;
}

}  // namespace oracle
