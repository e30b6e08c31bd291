#include "qdquapi/influence.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "qdquapi/errors.hpp"
#include "qdquapi/units.hpp"

namespace qdquapi {

namespace {

constexpr double kCutoffMultiple = 8.0;
constexpr Complex kI{0.0, 1.0};

// w coth(beta w / 2), finite at w = 0 where it tends to 2 / beta.
double omega_coth(double w, double beta) {
  const double y = 0.5 * beta * w;
  if (y < 1e-6) return 2.0 / beta * (1.0 + y * y / 3.0);
  return w / std::tanh(y);
}

// Composite Simpson on [a, b] with n (even) intervals. Also accumulates int |f|.
template <typename F>
Complex simpson(const F& f, double a, double b, int n, double& abs_sum) {
  const double h = (b - a) / n;
  Complex sum = f(a) + f(b);
  abs_sum = std::abs(f(a)) + std::abs(f(b));
  for (int i = 1; i < n; ++i) {
    const Complex v = f(a + i * h);
    const double w = (i % 2 == 1) ? 4.0 : 2.0;
    sum += w * v;
    abs_sum += w * std::abs(v);
  }
  abs_sum *= h / 3.0;
  return sum * (h / 3.0);
}

template <typename F>
Complex integrate(const F& f, double a, double b, const QuadratureOptions& opts) {
  int n = opts.min_intervals + (opts.min_intervals % 2);
  double scale = 0.0;
  Complex coarse = simpson(f, a, b, n, scale);
  double change = 0.0;
  while (true) {
    n *= 2;
    Complex fine = simpson(f, a, b, n, scale);
    const double ref = scale > 0.0 ? scale : 1.0;
    change = std::abs(fine - coarse) / ref;
    const Complex extrapolated = fine + (fine - coarse) / 15.0;
    if (scale == 0.0 || change <= opts.tolerance) return extrapolated;
    if (n >= opts.max_intervals) {
      if (change > opts.failure_threshold) {
        std::ostringstream msg;
        msg << "frequency quadrature did not converge: relative change " << change << " at "
            << n << " intervals";
        throw NumericError(msg.str());
      }
      return extrapolated;
    }
    coarse = fine;
  }
}

double upper_limit(const BathSpec& bath) { return kCutoffMultiple * bath.omega_c; }

// J(w) / w^2, continuous at 0.
double density_over_w2(const BathSpec& bath, double w) {
  const double x = w / bath.omega_c;
  return bath.alpha * w * std::exp(-x * x);
}

// J(w) coth(beta w / 2) / w^2, continuous at 0.
double thermal_density_over_w2(const BathSpec& bath, double w) {
  const double x = w / bath.omega_c;
  return bath.alpha * std::exp(-x * x) * omega_coth(w, bath.beta());
}

Complex eta_diagonal(const BathSpec& bath, double dt, const QuadratureOptions& opts) {
  auto f = [&](double w) {
    const double s = std::sin(0.5 * w * dt);
    const double re = thermal_density_over_w2(bath, w) * 2.0 * s * s;
    const double im = density_over_w2(bath, w) * (std::sin(w * dt) - w * dt);
    return Complex(re, im);
  };
  return integrate(f, 0.0, upper_limit(bath), opts) / units::kPi;
}

Complex eta_separated(const BathSpec& bath, double dt, int separation,
                      const QuadratureOptions& opts) {
  auto f = [&](double w) {
    const double s = std::sin(0.5 * w * dt);
    const double window = 4.0 * s * s;
    const double phase = w * separation * dt;
    return window * Complex(thermal_density_over_w2(bath, w) * std::cos(phase),
                            -density_over_w2(bath, w) * std::sin(phase));
  };
  return integrate(f, 0.0, upper_limit(bath), opts) / units::kPi;
}

}  // namespace

Complex bath_correlation(const BathSpec& bath, double t, const QuadratureOptions& opts) {
  bath.validate();
  auto f = [&](double w) {
    const double w2 = w * w;
    return Complex(w2 * thermal_density_over_w2(bath, w) * std::cos(w * t),
                   -w2 * density_over_w2(bath, w) * std::sin(w * t));
  };
  return integrate(f, 0.0, upper_limit(bath), opts) / units::kPi;
}

double reorganization_energy(const BathSpec& bath, const QuadratureOptions& opts) {
  bath.validate();
  auto f = [&](double w) { return Complex(w * density_over_w2(bath, w), 0.0); };
  return integrate(f, 0.0, upper_limit(bath), opts).real() / units::kPi;
}

Complex MemoryKernel::eta(int separation) const {
  if (separation == 0) return eta_diag;
  return eta_off.at(static_cast<std::size_t>(separation - 1));
}

MemoryKernel memory_kernel(const BathSpec& bath, double dt, int kmax,
                           const QuadratureOptions& opts) {
  bath.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be > 0");
  if (kmax < 1) throw DomainError("kmax must be >= 1");
  MemoryKernel kernel;
  kernel.dt = dt;
  kernel.kmax = kmax;
  kernel.bath = bath;
  kernel.eta_diag = eta_diagonal(bath, dt, opts);
  kernel.eta_off.reserve(static_cast<std::size_t>(kmax));
  for (int s = 1; s <= kmax; ++s) kernel.eta_off.push_back(eta_separated(bath, dt, s, opts));
  return kernel;
}

Complex eta_between(const BathSpec& bath, double dt, int k, int kp,
                    const QuadratureOptions& opts) {
  bath.validate();
  if (k < kp || kp < 1) throw DomainError("eta_between needs k >= k' >= 1");
  if (k == kp) return eta_diagonal(bath, dt, opts);
  const double a1 = (k - 1) * dt, a2 = k * dt;
  const double b1 = (kp - 1) * dt, b2 = kp * dt;
  auto f = [&](double w) {
    // (int_a e^{-iws} ds) (int_b e^{+iws'} ds') times w^2
    const Complex fa = std::exp(-kI * (w * a1)) - std::exp(-kI * (w * a2));
    const Complex fb = std::conj(std::exp(-kI * (w * b1)) - std::exp(-kI * (w * b2)));
    const Complex g = fa * fb;
    return Complex(thermal_density_over_w2(bath, w) * g.real(),
                   density_over_w2(bath, w) * g.imag());
  };
  return integrate(f, 0.0, upper_limit(bath), opts) / units::kPi;
}

namespace {

constexpr const char* kKernelMagic = "qdquapi-kernel";
constexpr int kKernelVersion = 1;

void put(std::ostream& os, const char* key, double v) {
  os << key << ' ' << std::hexfloat << v << std::defaultfloat << '\n';
}

double parse_double(const std::string& token) {
  std::size_t pos = 0;
  const double v = std::stod(token, &pos);
  if (pos != token.size()) throw NumericError("kernel cache: bad number '" + token + "'");
  return v;
}

double expect(std::istream& is, const std::string& key) {
  std::string k, v;
  if (!(is >> k >> v) || k != key) throw NumericError("kernel cache: expected '" + key + "'");
  return parse_double(v);
}

}  // namespace

void write_kernel(std::ostream& os, const MemoryKernel& kernel) {
  os << kKernelMagic << " v" << kKernelVersion << '\n';
  put(os, "dt", kernel.dt);
  os << "kmax " << kernel.kmax << '\n';
  put(os, "alpha", kernel.bath.alpha);
  put(os, "omega_c", kernel.bath.omega_c);
  put(os, "temperature", kernel.bath.temperature);
  for (int s = 0; s <= kernel.kmax; ++s) {
    const Complex e = kernel.eta(s);
    os << "eta " << s << ' ' << std::hexfloat << e.real() << ' ' << e.imag()
       << std::defaultfloat << '\n';
  }
}

MemoryKernel read_kernel(std::istream& is) {
  std::string magic, version;
  if (!(is >> magic >> version) || magic != kKernelMagic)
    throw NumericError("kernel cache: not a kernel file");
  if (version != "v" + std::to_string(kKernelVersion))
    throw NumericError("kernel cache: unsupported version " + version);
  MemoryKernel kernel;
  kernel.dt = expect(is, "dt");
  std::string key;
  if (!(is >> key >> kernel.kmax) || key != "kmax" || kernel.kmax < 1)
    throw NumericError("kernel cache: expected 'kmax'");
  kernel.bath.alpha = expect(is, "alpha");
  kernel.bath.omega_c = expect(is, "omega_c");
  kernel.bath.temperature = expect(is, "temperature");
  for (int s = 0; s <= kernel.kmax; ++s) {
    std::string tag, re, im;
    int index = -1;
    if (!(is >> tag >> index >> re >> im) || tag != "eta" || index != s)
      throw NumericError("kernel cache: truncated eta table");
    const Complex e(parse_double(re), parse_double(im));
    if (s == 0)
      kernel.eta_diag = e;
    else
      kernel.eta_off.push_back(e);
  }
  return kernel;
}

}  // namespace qdquapi
