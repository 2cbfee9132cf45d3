#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace fracmax {

/// Interior nodes x_i = a + i·h, i = 1..n, h = (b-a)/(n+1). x_0 = a and x_{n+1} = b
/// carry the zero exterior value.
struct SpaceGrid {
  double a = -1.0;
  double b = 1.0;
  int n = 1;

  double h() const { return (b - a) / (n + 1); }
  double x(int i) const { return a + (b - a) * i / (n + 1); }
  void validate() const;

  friend bool operator==(const SpaceGrid&, const SpaceGrid&) = default;
};

/// Grid function on the interior nodes; zero outside (a, b).
struct Field {
  SpaceGrid grid;
  Eigen::VectorXd values;

  static Field zeros(const SpaceGrid& grid) { return {grid, Eigen::VectorXd::Zero(grid.n)}; }
  template <class F>
  static Field sample(const SpaceGrid& grid, F&& f) {
    Field u = zeros(grid);
    for (int i = 1; i <= grid.n; ++i) u.values[i - 1] = f(grid.x(i));
    return u;
  }
};

/// Dense discrete (-Δ)^β with zero exterior condition.
struct FracLapMatrix {
  double beta = 0.5;
  SpaceGrid grid;
  Eigen::MatrixXd entries;
  double c = 0.0;  // c_{1,β}
};

/// c_{N,β} = β 2^{2β} Γ((N+2β)/2) / (π^{N/2} Γ(1-β)).
double normalization_constant(int N, double beta);

/// Off-diagonal coupling weights w_d (d = 1..count-1, w_0 = 0) in units of c·h^{-2β}:
/// A_ij = -c h^{-2β} w_{|i-j|}. w_1 includes the second-difference singular-cell term.
std::vector<double> coupling_weights(double beta, int count);

/// κ_i = ∫_{y ∉ (a,b)} |x_i - y|^{-1-2β} dy, in closed form.
double exterior_mass(const SpaceGrid& grid, int i, double beta);

/// Assembles the matrix: piecewise-linear far field integrated exactly cell by cell,
/// second-difference principal value on the two cells touching x_i, and the exterior
/// tail c·κ_i on the diagonal. Symmetric M-matrix with strictly positive row sums.
FracLapMatrix assemble_1d(const SpaceGrid& grid, double beta);

Field apply(const FracLapMatrix& A, const Field& u);

/// Discrete a(u, v) = (c/2) ∬ (u(x)-u(y))(v(x)-v(y)) |x-y|^{-1-2β} with u, v piecewise
/// constant on the node cells and zero elsewhere. Neighbouring cells use the assembly's
/// near-field weight; other cell pairs are integrated exactly.
double bilinear_a(const Field& u, const Field& v, double beta);

/// (u⁺, u⁻) with u = u⁺ - u⁻.
std::pair<Field, Field> sign_split(const Field& u);

/// Row-major CSV; first line "# beta=..,n=..,a=..,b=..".
void write_matrix_csv(const FracLapMatrix& A, std::ostream& os);

}  // namespace fracmax
