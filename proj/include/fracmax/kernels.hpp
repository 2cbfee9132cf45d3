#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace fracmax {

/// Uniform mesh t_n = n·T/M, n = 0..M.
struct TimeMesh {
  double horizon = 1.0;
  int steps = 1;

  double tau() const { return horizon / steps; }
  double t(int n) const { return horizon * n / steps; }
  std::size_t size() const { return static_cast<std::size_t>(steps) + 1; }
  void validate() const;
};

/// Samples of a function on a uniform mesh.
///
/// Kernels may additionally carry `cell_mass[j] = ∫_{t_j}^{t_{j+1}} k`, which the
/// convolution routines use in place of τ·k(t_j). A kernel that is unbounded at
/// t = 0 must carry cell masses; its `values[0]` is +inf.
struct TimeSeries {
  double tau = 1.0;
  std::vector<double> values;
  std::vector<double> cell_mass;

  std::size_t size() const { return values.size(); }
  bool has_cell_mass() const { return !cell_mass.empty(); }
};

/// Which approximate identity h_m defines g_{1-α,m} = g_{1-α} * h_m.
enum class Mollifier {
  /// h_m = m t^{α-1} E_{α,α}(-m t^α), g_{1-α,m} = m E_α(-m t^α). Nonincreasing kernel.
  resolvent,
  /// h_m = m e^{-mt}. g_{1-α,m} vanishes at 0 and is not monotone.
  exponential,
};

struct KernelSpec {
  double alpha = 0.5;
  double horizon = 1.0;
  std::optional<int> m;
  Mollifier family = Mollifier::resolvent;

  void validate() const;
};

/// g_γ(t) = t^{γ-1}/Γ(γ), γ ∈ (0,1], t > 0.
double g_kernel(double gamma, double t);

/// Exponential mollifier m·exp(-m t), m ≥ 1, t ≥ 0.
double h_kernel(int m, double t);

/// The pair (g_{1-α,m}, h_m) for one order, index and family, evaluated pointwise.
class RegularizedKernel {
 public:
  RegularizedKernel(double alpha, int m, Mollifier family = Mollifier::resolvent);

  double alpha() const { return alpha_; }
  int m() const { return m_; }
  Mollifier family() const { return family_; }

  /// g_{1-α,m}(t), t ≥ 0.
  double kernel(double t) const;
  /// ∫_a^b g_{1-α,m}, 0 ≤ a ≤ b.
  double kernel_mass(double a, double b) const;
  /// h_m(t); +inf at t = 0 for the resolvent family.
  double mollifier(double t) const;
  /// ∫_0^t h_m.
  double mollifier_cumulative(double t) const;
  /// ∫_0^t ∫_0^r h_m(s) ds dr.
  double mollifier_cumulative2(double t) const;

 private:
  double relaxation(double t) const;            // E_α(-m t^α)
  double relaxation_mass(double a, double b) const;  // ∫_a^b E_α(-m s^α) ds

  double alpha_;
  int m_;
  Mollifier family_;
  double lambda_;  // m^{1/α}
};

/// g_γ on the mesh: values[0] = +inf, exact cell masses.
TimeSeries sample_power_kernel(double gamma, const TimeMesh& mesh);

/// h_m on the mesh with exact cell masses (cumulative differences).
TimeSeries sample_mollifier(const RegularizedKernel& kernel, const TimeMesh& mesh);

/// g_{1-α,m}(t_n), n = 0..M, with exact cell masses. Nonnegative and finite at 0.
TimeSeries regularized_kernel(double alpha, int m, const TimeMesh& mesh,
                              Mollifier family = Mollifier::resolvent);

/// ‖g_{1-α,m} - g_{1-α}‖_{L¹[0,T]} by adaptive quadrature in v = t^{1-α}.
double l1_distance_to_power_kernel(double alpha, int m, double horizon,
                                   Mollifier family = Mollifier::resolvent);

/// Causal sum (k*u)(t_n) ≈ Σ_{j=0}^{n-1} w_j u_{n-j}, with w_j the kernel's cell mass
/// (or τ·k_j when it has none). Output at n = 0 is 0.
TimeSeries convolve(const TimeSeries& k, const TimeSeries& u);

/// Product of two kernels given by cell masses: (a*b)(t_n) ≈ τ⁻¹ Σ_{j=0}^{n-1} A_j B_{n-1-j}.
TimeSeries convolve_kernels(const TimeSeries& a, const TimeSeries& b);

/// Samples f(t_n) on the mesh.
template <class F>
TimeSeries sample(F&& f, const TimeMesh& mesh) {
  TimeSeries s;
  s.tau = mesh.tau();
  s.values.resize(mesh.size());
  for (int n = 0; n <= mesh.steps; ++n) s.values[n] = f(mesh.t(n));
  return s;
}

}  // namespace fracmax
