#include "fracmax/fraclap.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "fracmax/errors.hpp"

namespace fracmax {

namespace {

void check_beta(double beta, const char* where) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError(fmt::format("{}: beta must lie in (0, 1)", where));
}

void check_same_grid(const SpaceGrid& g1, const SpaceGrid& g2, const char* where) {
  if (!(g1 == g2)) throw ContractError(fmt::format("{}: fields live on different grids", where));
}

// ((k+1)^e - k^e)/e, continuous through e = 0 (log).
double power_step(double k, double e) {
  const double l = std::log1p(1.0 / k);
  if (e == 0.0) return l;
  return std::pow(k, e) * std::expm1(e * l) / e;
}

// Binomial series coefficients C(-1-2β, m).
std::vector<double> binomial_coeffs(double beta, int count) {
  std::vector<double> c(count);
  c[0] = 1.0;
  for (int m = 1; m < count; ++m) c[m] = c[m - 1] * (-1.0 - 2.0 * beta - (m - 1)) / m;
  return c;
}

constexpr int kSeriesFrom = 4;
constexpr int kSeriesTerms = 60;

struct CellIntegrals {
  double left;   // ∫_0^1 (k+s)^{-1-2β} (1-s) ds
  double right;  // ∫_0^1 (k+s)^{-1-2β} s ds
};

CellIntegrals hat_integrals(double beta, int k, const std::vector<double>& coeffs) {
  const double kd = k;
  if (k < kSeriesFrom) {
    const double P = power_step(kd, -2.0 * beta);  // ∫ ρ^{-1-2β}
    const double Q = power_step(kd, 1.0 - 2.0 * beta);  // ∫ ρ^{-2β}
    return {(kd + 1.0) * P - Q, Q - kd * P};
  }
  double left = 0.0;
  double right = 0.0;
  double kpow = 1.0;
  for (int m = 0; m < kSeriesTerms; ++m) {
    const double t = coeffs[m] * kpow;
    left += t / ((m + 1.0) * (m + 2.0));
    right += t / (m + 2.0);
    kpow /= kd;
    if (std::abs(t) < 1e-18 * std::abs(right)) break;
  }
  const double scale = std::pow(kd, -1.0 - 2.0 * beta);
  return {scale * left, scale * right};
}

// ∫_{-1}^{1} (1-|s|) (d+s)^{-1-2β} ds: interaction of two unit cells whose centers are d apart.
double cell_pair_integral(double beta, int d, const std::vector<double>& coeffs) {
  const double dd = d;
  if (d < kSeriesFrom) {
    // Second difference of F with F'' = r^{-1-2β}; F(r) = (r^e - 1)/(e·(-2β)), e = 1-2β.
    const double e = 1.0 - 2.0 * beta;
    auto F = [&](double r) {
      const double lr = std::log(r);
      const double g = e == 0.0 ? lr : std::expm1(e * lr) / e;
      return -g / (2.0 * beta);
    };
    return F(dd + 1.0) - 2.0 * F(dd) + F(dd - 1.0);
  }
  double sum = 0.0;
  double dpow = 1.0;
  for (int m = 0; m < kSeriesTerms; m += 2) {
    const double t = coeffs[m] * dpow * 2.0 / ((m + 1.0) * (m + 2.0));
    sum += t;
    dpow /= dd * dd;
    if (std::abs(t) < 1e-18 * std::abs(sum)) break;
  }
  return std::pow(dd, -1.0 - 2.0 * beta) * sum;
}

}  // namespace

void SpaceGrid::validate() const {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw DomainError("SpaceGrid: need a < b");
  if (n < 1) throw DomainError("SpaceGrid: need at least one interior node");
}

double normalization_constant(int N, double beta) {
  check_beta(beta, "normalization_constant");
  if (N < 1) throw DomainError("normalization_constant: dimension must be >= 1");
  return beta * std::pow(2.0, 2.0 * beta) * std::tgamma((N + 2.0 * beta) / 2.0) /
         (std::pow(std::numbers::pi, N / 2.0) * std::tgamma(1.0 - beta));
}

std::vector<double> coupling_weights(double beta, int count) {
  check_beta(beta, "coupling_weights");
  std::vector<double> w(std::max(count, 2), 0.0);
  const auto coeffs = binomial_coeffs(beta, kSeriesTerms);
  // w_d = left-hat part of cell [d, d+1] + right-hat part of cell [d-1, d].
  CellIntegrals prev = hat_integrals(beta, 1, coeffs);
  w[1] = prev.left + 1.0 / (2.0 - 2.0 * beta);
  for (int d = 2; d < count; ++d) {
    const CellIntegrals cur = hat_integrals(beta, d, coeffs);
    w[d] = cur.left + prev.right;
    prev = cur;
  }
  w.resize(count);
  return w;
}

double exterior_mass(const SpaceGrid& grid, int i, double beta) {
  check_beta(beta, "exterior_mass");
  const double x = grid.x(i);
  return (std::pow(x - grid.a, -2.0 * beta) + std::pow(grid.b - x, -2.0 * beta)) / (2.0 * beta);
}

FracLapMatrix assemble_1d(const SpaceGrid& grid, double beta) {
  check_beta(beta, "assemble_1d");
  grid.validate();
  const int n = grid.n;
  const double c = normalization_constant(1, beta);
  const double scale = c * std::pow(grid.h(), -2.0 * beta);
  const auto w = coupling_weights(beta, n + 1);

  FracLapMatrix A{beta, grid, Eigen::MatrixXd::Zero(n, n), c};
  const double near = 2.0 / (2.0 - 2.0 * beta);
  // Kernel mass of the far cells inside (a,b) at offsets [k, k+1], k = 1..K: telescopes.
  auto far_mass = [&](int K) { return (1.0 - std::pow(K + 1.0, -2.0 * beta)) / (2.0 * beta); };
  for (int i = 1; i <= n; ++i) {
    A.entries(i - 1, i - 1) =
        scale * (near + far_mass(i - 1) + far_mass(n - i)) + c * exterior_mass(grid, i, beta);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v = -scale * w[j - i];
      A.entries(i, j) = v;
      A.entries(j, i) = v;
    }
  }
  return A;
}

Field apply(const FracLapMatrix& A, const Field& u) {
  check_same_grid(A.grid, u.grid, "apply");
  return {u.grid, A.entries * u.values};
}

double bilinear_a(const Field& u, const Field& v, double beta) {
  check_same_grid(u.grid, v.grid, "bilinear_a");
  check_beta(beta, "bilinear_a");
  const SpaceGrid& g = u.grid;
  const int n = g.n;
  const double h = g.h();
  const double c = normalization_constant(1, beta);
  const auto coeffs = binomial_coeffs(beta, kSeriesTerms);

  std::vector<double> W(n, 0.0);
  if (n > 1) W[1] = coupling_weights(beta, 2)[1];
  for (int d = 2; d < n; ++d) W[d] = cell_pair_integral(beta, d, coeffs);

  const auto& uu = u.values;
  const auto& vv = v.values;
  double pairs = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs += W[j - i] * (uu[i] - uu[j]) * (vv[i] - vv[j]);
  }
  // Both orderings of each pair: (c/2)·2.
  double value = c * std::pow(h, 1.0 - 2.0 * beta) * pairs;

  // Cells outside [a + h/2, b - h/2] carry u = v = 0.
  double tail = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double kappa =
        (std::pow(i - 0.5, -2.0 * beta) + std::pow(n + 0.5 - i, -2.0 * beta)) / (2.0 * beta);
    tail += kappa * uu[i - 1] * vv[i - 1];
  }
  value += c * std::pow(h, 1.0 - 2.0 * beta) * tail;
  return value;
}

std::pair<Field, Field> sign_split(const Field& u) {
  Field pos{u.grid, u.values.cwiseMax(0.0)};
  Field neg{u.grid, (-u.values).cwiseMax(0.0)};
  return {pos, neg};
}

void write_matrix_csv(const FracLapMatrix& A, std::ostream& os) {
  os << fmt::format("# beta={:.17g},n={},a={:.17g},b={:.17g}\n", A.beta, A.grid.n, A.grid.a, A.grid.b);
  const auto& M = A.entries;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) os << ',';
      os << fmt::format("{:.17g}", M(i, j));
    }
    os << '\n';
  }
}

}  // namespace fracmax
