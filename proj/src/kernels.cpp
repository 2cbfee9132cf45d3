#include "fracmax/kernels.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>

#include "fracmax/errors.hpp"
#include "fracmax/special.hpp"

namespace fracmax {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kInf = std::numeric_limits<double>::infinity();

bool same_step(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }

void check_order(double alpha, const char* where) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError(std::string(where) + ": alpha must lie in (0, 1)");
  }
}

// ∫_a^b g_{1-α} = (b^{1-α} - a^{1-α}) / Γ(2-α).
double power_kernel_mass(double gamma, double a, double b) {
  return (std::pow(b, gamma) - std::pow(a, gamma)) / std::tgamma(gamma + 1.0);
}

}  // namespace

void TimeMesh::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("TimeMesh: horizon must be > 0");
  if (steps < 1) throw DomainError("TimeMesh: mesh needs at least one step");
}

void KernelSpec::validate() const {
  check_order(alpha, "KernelSpec");
  if (!(horizon > 0.0)) throw DomainError("KernelSpec: horizon must be > 0");
  if (m && *m < 1) throw DomainError("KernelSpec: m must be >= 1");
}

double g_kernel(double gamma, double t) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("g_kernel: gamma must lie in (0, 1]");
  if (!(t > 0.0)) throw DomainError("g_kernel: t must be > 0");
  return std::pow(t, gamma - 1.0) / std::tgamma(gamma);
}

double h_kernel(int m, double t) {
  if (m < 1) throw DomainError("h_kernel: m must be >= 1");
  if (!(t >= 0.0)) throw DomainError("h_kernel: t must be >= 0");
  return m * std::exp(-m * t);
}

RegularizedKernel::RegularizedKernel(double alpha, int m, Mollifier family)
    : alpha_(alpha), m_(m), family_(family) {
  check_order(alpha, "RegularizedKernel");
  if (m < 1) throw DomainError("RegularizedKernel: m must be >= 1");
  lambda_ = std::pow(static_cast<double>(m), 1.0 / alpha);
}

double RegularizedKernel::relaxation(double t) const {
  if (t == 0.0) return 1.0;
  const double s = lambda_ * t;
  return stieltjes_ml_transform(alpha_, [s](double p) { return std::exp(-p * s); });
}

double RegularizedKernel::relaxation_mass(double a, double b) const {
  if (b <= a) return 0.0;
  const double lam = lambda_;
  const double width = b - a;
  return stieltjes_ml_transform(alpha_, [=](double p) {
    const double q = p * lam;
    if (q * width < 1e-300) return width;
    return std::exp(-q * a) * -std::expm1(-q * width) / q;
  });
}

double RegularizedKernel::kernel(double t) const {
  if (!(t >= 0.0)) throw DomainError("RegularizedKernel::kernel: t must be >= 0");
  if (family_ == Mollifier::resolvent) return m_ * relaxation(t);
  if (t == 0.0) return 0.0;
  // m/Γ(1-α) ∫_0^t s^{-α} e^{-m(t-s)} ds in closed form.
  const double mm = m_;
  return mm * std::pow(t, 1.0 - alpha_) * boost::math::hypergeometric_1F1(1.0, 2.0 - alpha_, -mm * t) /
         std::tgamma(2.0 - alpha_);
}

double RegularizedKernel::kernel_mass(double a, double b) const {
  if (!(a >= 0.0 && b >= a)) throw DomainError("RegularizedKernel::kernel_mass: need 0 <= a <= b");
  if (family_ == Mollifier::resolvent) return m_ * relaxation_mass(a, b);
  // g_m' = m (g - g_m)  =>  ∫_a^b g_m = ∫_a^b g - (g_m(b) - g_m(a)) / m.
  return power_kernel_mass(1.0 - alpha_, a, b) - (kernel(b) - kernel(a)) / m_;
}

double RegularizedKernel::mollifier(double t) const {
  if (!(t >= 0.0)) throw DomainError("RegularizedKernel::mollifier: t must be >= 0");
  if (family_ == Mollifier::exponential) return h_kernel(m_, t);
  if (t == 0.0) return kInf;
  const double s = lambda_ * t;
  return lambda_ * stieltjes_ml_transform(alpha_, [s](double p) { return p * std::exp(-p * s); });
}

double RegularizedKernel::mollifier_cumulative(double t) const {
  if (!(t >= 0.0)) throw DomainError("RegularizedKernel: t must be >= 0");
  if (family_ == Mollifier::exponential) return -std::expm1(-m_ * t);
  return 1.0 - relaxation(t);
}

double RegularizedKernel::mollifier_cumulative2(double t) const {
  if (!(t >= 0.0)) throw DomainError("RegularizedKernel: t must be >= 0");
  if (family_ == Mollifier::exponential) return t + std::expm1(-m_ * t) / m_;
  return t - relaxation_mass(0.0, t);
}

TimeSeries sample_power_kernel(double gamma, const TimeMesh& mesh) {
  mesh.validate();
  TimeSeries k;
  k.tau = mesh.tau();
  k.values.resize(mesh.size());
  k.cell_mass.resize(mesh.steps);
  k.values[0] = kInf;
  for (int n = 1; n <= mesh.steps; ++n) k.values[n] = g_kernel(gamma, mesh.t(n));
  for (int j = 0; j < mesh.steps; ++j) {
    k.cell_mass[j] = power_kernel_mass(gamma, mesh.t(j), mesh.t(j + 1));
  }
  return k;
}

TimeSeries sample_mollifier(const RegularizedKernel& kernel, const TimeMesh& mesh) {
  mesh.validate();
  TimeSeries h;
  h.tau = mesh.tau();
  h.values.resize(mesh.size());
  h.cell_mass.resize(mesh.steps);
  std::vector<double> cumulative(mesh.size());
  for (int n = 0; n <= mesh.steps; ++n) {
    h.values[n] = kernel.mollifier(mesh.t(n));
    cumulative[n] = kernel.mollifier_cumulative(mesh.t(n));
  }
  for (int j = 0; j < mesh.steps; ++j) h.cell_mass[j] = cumulative[j + 1] - cumulative[j];
  return h;
}

TimeSeries regularized_kernel(double alpha, int m, const TimeMesh& mesh, Mollifier family) {
  mesh.validate();
  const RegularizedKernel kernel(alpha, m, family);
  TimeSeries k;
  k.tau = mesh.tau();
  k.values.resize(mesh.size());
  k.cell_mass.resize(mesh.steps);
  for (int n = 0; n <= mesh.steps; ++n) k.values[n] = kernel.kernel(mesh.t(n));
  for (int j = 0; j < mesh.steps; ++j) k.cell_mass[j] = kernel.kernel_mass(mesh.t(j), mesh.t(j + 1));
  return k;
}

double l1_distance_to_power_kernel(double alpha, int m, double horizon, Mollifier family) {
  const RegularizedKernel kernel(alpha, m, family);
  if (!(horizon > 0.0)) throw DomainError("l1_distance_to_power_kernel: horizon must be > 0");
  const double one_minus = 1.0 - alpha;
  const double g_weight = 1.0 / std::tgamma(2.0 - alpha);
  // t = v^{1/(1-α)}: g_{1-α}(t) dt = dv/Γ(2-α), g_m(t) dt = g_m(t) t^α/(1-α) dv.
  auto f = [&](double v) {
    if (v == 0.0) return g_weight;
    const double t = std::pow(v, 1.0 / one_minus);
    const double jac = std::pow(t, alpha) / one_minus;
    return std::abs(kernel.kernel(t) * jac - g_weight);
  };
  double err = 0.0;
  return gauss_kronrod<double, 31>::integrate(f, 0.0, std::pow(horizon, one_minus), 20, 1e-10, &err);
}

TimeSeries convolve(const TimeSeries& k, const TimeSeries& u) {
  if (!same_step(k.tau, u.tau)) throw ContractError("convolve: kernel and data use different steps");
  if (k.size() != u.size()) throw ContractError("convolve: kernel and data differ in length");
  if (k.size() == 0) throw ContractError("convolve: empty series");
  const std::size_t len = k.size();
  std::vector<double> w(len > 0 ? len - 1 : 0);
  if (k.has_cell_mass()) {
    if (k.cell_mass.size() + 1 != len) throw ContractError("convolve: cell_mass length must be size-1");
    w = k.cell_mass;
  } else {
    for (std::size_t j = 0; j + 1 < len; ++j) {
      if (!std::isfinite(k.values[j])) {
        throw ContractError("convolve: singular kernel sample without cell masses");
      }
      w[j] = k.tau * k.values[j];
    }
  }
  TimeSeries out;
  out.tau = u.tau;
  out.values.assign(len, 0.0);
  for (std::size_t n = 1; n < len; ++n) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += w[j] * u.values[n - j];
    out.values[n] = acc;
  }
  return out;
}

TimeSeries convolve_kernels(const TimeSeries& a, const TimeSeries& b) {
  if (!same_step(a.tau, b.tau)) throw ContractError("convolve_kernels: different steps");
  if (a.size() != b.size()) throw ContractError("convolve_kernels: different lengths");
  if (!a.has_cell_mass() || !b.has_cell_mass()) {
    throw ContractError("convolve_kernels: both kernels must carry cell masses");
  }
  const std::size_t len = a.size();
  TimeSeries out;
  out.tau = a.tau;
  out.values.assign(len, 0.0);
  for (std::size_t n = 1; n < len; ++n) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += a.cell_mass[j] * b.cell_mass[n - 1 - j];
    out.values[n] = acc / a.tau;
  }
  return out;
}

}  // namespace fracmax
