#include "fracmax/solver.hpp"

#include <cmath>

#include "fracmax/errors.hpp"
#include "fracmax/timefrac.hpp"

namespace fracmax {

void FracOrders::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("FracOrders: alpha must lie in (0, 1)");
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("FracOrders: beta must lie in (0, 1)");
}

void ProblemSpec::validate() const {
  orders.validate();
  grid.validate();
  if (!(mesh.horizon > 0.0) || mesh.steps < 0) throw DomainError("ProblemSpec: invalid time mesh");
  if (!(u0.grid == grid) || u0.values.size() != grid.n) {
    throw ContractError("ProblemSpec: u0 is not defined on the problem grid");
  }
  if (!forcing) throw ContractError("ProblemSpec: forcing is empty");
}

Eigen::MatrixXd ProblemSpec::sample_forcing() const {
  Eigen::MatrixXd f(mesh.steps + 1, grid.n);
  for (int n = 0; n <= mesh.steps; ++n) {
    const double t = mesh.steps == 0 ? 0.0 : mesh.t(n);
    for (int i = 1; i <= grid.n; ++i) f(n, i - 1) = forcing(grid.x(i), t);
  }
  return f;
}

SpaceTimeField SpaceTimeField::zeros(const SpaceGrid& grid, const TimeMesh& mesh) {
  return {grid, mesh, std::vector<Eigen::VectorXd>(mesh.size(), Eigen::VectorXd::Zero(grid.n))};
}

L1Stepper::L1Stepper(double alpha, double tau, int max_steps, const Eigen::MatrixXd& op)
    : b_(l1_weights(alpha, tau, static_cast<std::size_t>(std::max(max_steps, 1)))) {
  if (op.rows() != op.cols()) throw ContractError("L1Stepper: operator must be square");
  Eigen::MatrixXd system = op;
  system.diagonal().array() += b_[0];
  factor_.compute(system);
  if (factor_.info() != Eigen::Success) {
    throw NumericError("L1Stepper: Cholesky factorization of b0*I + A failed");
  }
}

Eigen::VectorXd L1Stepper::advance(std::span<const Eigen::VectorXd> history,
                                   const Eigen::VectorXd& forcing) const {
  const std::size_t n = history.size();
  if (n < 1) throw ContractError("L1Stepper::advance: history must contain u^0");
  if (n >= b_.size()) throw ContractError("L1Stepper::advance: more steps than the stepper was built for");
  Eigen::VectorXd rhs = forcing + b_[n - 1] * history[0];
  for (std::size_t k = 1; k < n; ++k) rhs.noalias() += (b_[k - 1] - b_[k]) * history[n - k];
  Eigen::VectorXd u = factor_.solve(rhs);
  if (!u.allFinite()) throw NumericError("L1Stepper::advance: non-finite state");
  return u;
}

Eigen::VectorXd step(const ProblemSpec& problem, const FracLapMatrix& A,
                     std::span<const Eigen::VectorXd> history) {
  if (!(A.grid == problem.grid) || A.beta != problem.orders.beta) {
    throw ContractError("step: matrix was not assembled for this problem");
  }
  const int n = static_cast<int>(history.size());
  const L1Stepper stepper(problem.orders.alpha, problem.mesh.tau(), n, A.entries);
  Eigen::VectorXd f(problem.grid.n);
  for (int i = 1; i <= problem.grid.n; ++i) f[i - 1] = problem.forcing(problem.grid.x(i), problem.mesh.t(n));
  return stepper.advance(history, f);
}

Solution solve(const ProblemSpec& problem) {
  problem.validate();
  Solution sol{problem, {problem.u0.values}};
  const int M = problem.mesh.steps;
  if (M == 0) return sol;
  const FracLapMatrix A = assemble_1d(problem.grid, problem.orders.beta);
  const L1Stepper stepper(problem.orders.alpha, problem.mesh.tau(), M, A.entries);
  const Eigen::MatrixXd f = problem.sample_forcing();
  sol.states.reserve(M + 1);
  for (int n = 1; n <= M; ++n) {
    Eigen::VectorXd next = stepper.advance(sol.states, f.row(n).transpose());
    sol.states.push_back(std::move(next));
  }
  return sol;
}

std::vector<double> relax_scalar(double alpha, double lambda, double u0, const TimeMesh& mesh) {
  mesh.validate();
  if (!(lambda >= 0.0)) throw DomainError("relax_scalar: lambda must be >= 0");
  const L1Stepper stepper(alpha, mesh.tau(), mesh.steps, Eigen::MatrixXd::Constant(1, 1, lambda));
  std::vector<Eigen::VectorXd> history{Eigen::VectorXd::Constant(1, u0)};
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  for (int n = 1; n <= mesh.steps; ++n) history.push_back(stepper.advance(history, zero));
  std::vector<double> out;
  out.reserve(history.size());
  for (const auto& v : history) out.push_back(v[0]);
  return out;
}

SpaceTimeField mollified_test_function(const SpaceTimeField& phi, int m, Mollifier family,
                                       double alpha) {
  const int M = phi.mesh.steps;
  if (static_cast<int>(phi.slices.size()) != M + 1) {
    throw ContractError("mollified_test_function: phi must have M+1 time slices");
  }
  for (const auto& s : phi.slices) {
    if (s.size() != phi.grid.n) throw ContractError("mollified_test_function: slice size mismatch");
    if ((s.array() < 0.0).any()) throw ContractError("mollified_test_function: phi must be nonnegative");
  }
  if (!phi.slices.back().isZero(0.0)) throw ContractError("mollified_test_function: phi(., T) must vanish");

  const RegularizedKernel kernel(alpha, m, family);
  const double tau = phi.mesh.tau();
  // Offsets r = d·τ: H = ∫_0^r h, I = ∫_0^r H.
  std::vector<double> H(M + 1), I(M + 1);
  for (int d = 0; d <= M; ++d) {
    H[d] = kernel.mollifier_cumulative(d * tau);
    I[d] = kernel.mollifier_cumulative2(d * tau);
  }
  std::vector<double> mass(M), first(M);
  for (int d = 0; d < M; ++d) {
    mass[d] = H[d + 1] - H[d];
    first[d] = tau * H[d + 1] - (I[d + 1] - I[d]);  // ∫_p^q (r - p) h(r) dr
  }

  SpaceTimeField eta = SpaceTimeField::zeros(phi.grid, phi.mesh);
  for (int n = 0; n < M; ++n) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(phi.grid.n);
    for (int j = n; j < M; ++j) {
      const int d = j - n;
      acc += mass[d] * phi.slices[j] + (first[d] / tau) * (phi.slices[j + 1] - phi.slices[j]);
    }
    // Mixed-sign rounding in the slope term must not leave η below zero.
    eta.slices[n] = acc.cwiseMax(0.0);
  }
  return eta;
}

namespace {

std::vector<double> residual_profile(const Solution& sol, const Field& psi, int m, Mollifier family,
                                     int first_n, int last_n) {
  const ProblemSpec& p = sol.problem;
  if (!(psi.grid == p.grid)) throw ContractError("weak_residual: psi lives on a different grid");
  if ((psi.values.array() < 0.0).any()) throw ContractError("weak_residual: psi must be nonnegative");
  if (m < 1) throw DomainError("weak_residual: m must be >= 1");
  const int M = p.mesh.steps;
  if (first_n < 1 || last_n > M || static_cast<int>(sol.states.size()) != M + 1) {
    throw ContractError("weak_residual: time index out of range");
  }
  const double tau = p.mesh.tau();
  const double h = p.grid.h();
  const RegularizedKernel kernel(p.orders.alpha, m, family);
  std::vector<double> G(M), Hm(M);
  {
    double prev = kernel.mollifier_cumulative(0.0);
    for (int j = 0; j < M; ++j) {
      G[j] = kernel.kernel_mass(p.mesh.t(j), p.mesh.t(j + 1));
      const double next = kernel.mollifier_cumulative(p.mesh.t(j + 1));
      Hm[j] = next - prev;
      prev = next;
    }
  }
  const Eigen::MatrixXd f = p.sample_forcing();
  const Eigen::VectorXd& u0 = sol.states[0];

  auto conv_g = [&](int n) {  // Σ_{j<n} G_j (u^{n-j} - u^0)
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(p.grid.n);
    for (int j = 0; j < n; ++j) acc += G[j] * (sol.states[n - j] - u0);
    return acc;
  };

  std::vector<double> out(M + 1, 0.0);
  for (int n = first_n; n <= last_n; ++n) {
    const Eigen::VectorXd dg = (conv_g(n) - conv_g(n - 1)) / tau;
    Eigen::VectorXd hu = Eigen::VectorXd::Zero(p.grid.n);
    Eigen::VectorXd hf = Eigen::VectorXd::Zero(p.grid.n);
    for (int j = 0; j < n; ++j) {
      hu += Hm[j] * sol.states[n - j];
      hf += Hm[j] * f.row(n - j).transpose();
    }
    out[n] = h * psi.values.dot(dg) + bilinear_a(Field{p.grid, hu}, psi, p.orders.beta) -
             h * psi.values.dot(hf);
  }
  return out;
}

}  // namespace

double weak_residual(const Solution& sol, const Field& psi, int m, int n, Mollifier family) {
  return residual_profile(sol, psi, m, family, n, n)[n];
}

std::vector<double> weak_residual_profile(const Solution& sol, const Field& psi, int m,
                                          Mollifier family) {
  return residual_profile(sol, psi, m, family, 1, sol.problem.mesh.steps);
}

double weak_residual_l1(const Solution& sol, const Field& psi, int m, Mollifier family) {
  const std::vector<double> r = weak_residual_profile(sol, psi, m, family);
  double sum = 0.0;
  for (std::size_t n = 1; n < r.size(); ++n) sum += std::abs(r[n]);
  return sol.problem.mesh.tau() * sum;
}

}  // namespace fracmax
