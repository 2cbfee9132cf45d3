#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fracmax/fraclap.hpp"
#include "fracmax/kernels.hpp"

namespace fracmax {

struct FracOrders {
  double alpha = 0.5;
  double beta = 0.5;

  void validate() const;
};

using Forcing = std::function<double(double x, double t)>;

struct ProblemSpec {
  FracOrders orders;
  SpaceGrid grid;
  TimeMesh mesh;
  Field u0;
  Forcing forcing;

  void validate() const;
  /// f(x_i, t_n) as an (M+1) × n array, row n = time level.
  Eigen::MatrixXd sample_forcing() const;
};

/// Space-time grid function: one interior-node vector per time level.
struct SpaceTimeField {
  SpaceGrid grid;
  TimeMesh mesh;
  std::vector<Eigen::VectorXd> slices;

  static SpaceTimeField zeros(const SpaceGrid& grid, const TimeMesh& mesh);
};

struct Solution {
  ProblemSpec problem;
  std::vector<Eigen::VectorXd> states;  // u^0 .. u^M, states[0] == u0

  Field state(int n) const { return {problem.grid, states.at(n)}; }
};

/// L1-implicit stepping for ∂_t^α(u - u_0) + K u = f with a fixed SPD M-matrix K:
///   (b_0 I + K) u^n = Σ_{k=1}^{n-1} (b_{k-1} - b_k) u^{n-k} + b_{n-1} u^0 + f^n.
/// The history coefficients are all nonnegative (b_j decreasing), so with an M-matrix K
/// nonnegative data stays nonnegative. The factorization is computed once.
class L1Stepper {
 public:
  L1Stepper(double alpha, double tau, int max_steps, const Eigen::MatrixXd& op);

  /// history = u^0..u^{n-1} (n ≥ 1); returns u^n.
  Eigen::VectorXd advance(std::span<const Eigen::VectorXd> history, const Eigen::VectorXd& forcing) const;

  const std::vector<double>& weights() const { return b_; }

 private:
  std::vector<double> b_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
};

/// One step of the scheme with the assembled fractional Laplacian.
Eigen::VectorXd step(const ProblemSpec& problem, const FracLapMatrix& A,
                     std::span<const Eigen::VectorXd> history);

/// Assembles (-Δ)^β once and runs M steps.
Solution solve(const ProblemSpec& problem);

/// Scalar relaxation ∂_t^α(u - u_0) + λu = 0 through the same stepper with K = [λ].
/// Returns u^0..u^M; the exact solution is u_0 E_α(-λ t^α).
std::vector<double> relax_scalar(double alpha, double lambda, double u0, const TimeMesh& mesh);

/// η(x, t) = ∫_t^T h_m(σ - t) φ(x, σ) dσ with φ piecewise linear in time, integrated
/// exactly cell by cell. φ ≥ 0 and φ(·, T) = 0 are required.
SpaceTimeField mollified_test_function(const SpaceTimeField& phi, int m, Mollifier family,
                                       double alpha);

/// LHS - RHS of the mollified weak form at t_n (1 ≤ n ≤ M):
///   ∫ ψ ∂_t[g_{1-α,m} * (u - u_0)] dx + a(h_m * u, ψ) - ∫ (h_m * f) ψ dx.
/// Time convolutions use exact kernel cell masses, ∂_t is the difference over
/// [t_{n-1}, t_n], space integrals are h-weighted node sums. ψ ≥ 0 required.
double weak_residual(const Solution& sol, const Field& psi, int m, int n,
                     Mollifier family = Mollifier::resolvent);

/// weak_residual at every n = 1..M (index 0 of the result is unused and zero).
std::vector<double> weak_residual_profile(const Solution& sol, const Field& psi, int m,
                                          Mollifier family = Mollifier::resolvent);

/// τ Σ_{n=1}^M |weak_residual(n)|, the discrete L¹(0,T) size of the residual. The first
/// steps carry an initial layer that the mesh does not resolve, so this norm (not the
/// maximum over n) is the one that shrinks under refinement.
double weak_residual_l1(const Solution& sol, const Field& psi, int m,
                        Mollifier family = Mollifier::resolvent);

}  // namespace fracmax
