#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "fracmax/kernels.hpp"

namespace fracmax {

/// Grünwald–Letnikov weights w_j = (-1)^j C(α, j), j = 0..n.
std::vector<double> gl_weights(double alpha, std::size_t n);

/// L1 weights b_j = τ^{-α}((j+1)^{1-α} - j^{1-α})/Γ(2-α), j = 0..n.
std::vector<double> l1_weights(double alpha, double tau, std::size_t n);

enum class CaputoKind { gl, l1 };

/// A precomputed discretization of ∂_t^α(u - u(0)) on a uniform mesh.
class CaputoScheme {
 public:
  CaputoScheme(double alpha, double tau, CaputoKind kind, std::size_t max_index);

  double alpha() const { return alpha_; }
  double tau() const { return tau_; }
  CaputoKind kind() const { return kind_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  double alpha_;
  double tau_;
  CaputoKind kind_;
  std::vector<double> weights_;
};

/// Discrete ∂_t^α(u - u_0)(t_n). Zero for constant u; zero at n = 0.
double caputo_apply(const TimeSeries& u, const CaputoScheme& scheme, std::size_t n);

/// A C¹ convex function and its derivative.
struct ConvexProbe {
  std::function<double(double)> value;
  std::function<double(double)> slope;

  static ConvexProbe linear();               // H(y) = y
  static ConvexProbe half_square();          // H(y) = y²/2
  static ConvexProbe half_positive_square(); // H(y) = (y⁺)²/2
};

/// LHS - RHS of the convexity identity
///   H'(u) d/dt(k*u) = d/dt(k*H(u)) + (H'(u)u - H(u)) k(t)
///                     + ∫_0^t [H(u(t-s)) - H(u(t)) - H'(u(t))(u(t-s) - u(t))] (-k'(s)) ds
/// at t_n, n ≥ 1. Convolutions use convolve(); d/dt is the difference over
/// [t_{n-1}, t_n]; k' is a centered difference; the remainder integral is trapezoidal.
/// k must be bounded (a regularized kernel), otherwise ContractError.
double fundamental_identity_residual(const TimeSeries& u, const ConvexProbe& probe,
                                     const TimeSeries& k, std::size_t n);

/// Verdicts for the three positive/negative-part inequalities at one time index.
struct InequalityVerdict {
  std::size_t index = 0;
  double positive_slack = 0.0;   // u⁺ D(k*u) - ½ D(k*(u⁺)²), must be ≥ -tol
  double negated_slack = 0.0;    // same with v = -u
  double negative_slack = 0.0;   // u⁻ D(k*u) + ½ D(k*(u⁻)²), must be ≤ tol
  bool positive_ok = true;
  bool negated_ok = true;
  bool negative_ok = true;

  bool all_ok() const { return positive_ok && negated_ok && negative_ok; }
};

/// 1e-10 · max(1, ‖u‖²_∞ ‖k‖_{L¹}).
double inequality_tolerance(const TimeSeries& u, const TimeSeries& k);

/// Evaluates the three inequalities at n = 1..M. D(k*w)_n = (k*w)_n - (k*w)_{n-1} over τ,
/// paired with the state u_n at the end of the step.
std::vector<InequalityVerdict> convex_inequality_check(const TimeSeries& u, const TimeSeries& k);

enum class Extremum { max, min };

struct ExtremumSign {
  double value = 0.0;  // L1-discrete ∂_t^α(u - u_0)(t_{n0})
  double tolerance = 0.0;
  bool pass = false;
};

/// Sign of the L1 derivative at an extremum index n0 ≥ 1. tol = rel_tol · max(1, ‖u‖_∞) · b_0.
ExtremumSign rl_extremum_sign(const TimeSeries& u, double alpha, std::size_t n0, Extremum mode,
                              double rel_tol = 1e-8);

}  // namespace fracmax
