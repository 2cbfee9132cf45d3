#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/special_functions/gamma.hpp>
#include <doctest.h>

#include "fracmax/errors.hpp"
#include "fracmax/principles.hpp"
#include "fracmax/timefrac.hpp"

using namespace fracmax;

namespace {

// Σ_{j≤n} (-1)^j C(α, j) = Γ(n+1-α) / (Γ(1-α) Γ(n+1)).
double gl_partial_sum_oracle(double alpha, int n) {
  return std::exp(boost::math::lgamma(n + 1.0 - alpha) - boost::math::lgamma(1.0 - alpha) -
                  boost::math::lgamma(n + 1.0));
}

double l1_at_end(double alpha, int M, double (*u)(double)) {
  const TimeMesh mesh{1.0, M};
  const TimeSeries s = sample(u, mesh);
  const CaputoScheme scheme(alpha, mesh.tau(), CaputoKind::l1, M);
  return caputo_apply(s, scheme, M);
}

TimeSeries random_piecewise_linear(std::mt19937_64& rng, const TimeMesh& mesh) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_int_distribution<int> pieces(1, 12);
  const int p = pieces(rng);
  std::vector<double> knots(p + 1);
  for (double& v : knots) v = U(rng);
  return sample(
      [&](double t) {
        const double s = t / mesh.horizon * p;
        const int j = std::min(static_cast<int>(s), p - 1);
        return knots[j] + (s - j) * (knots[j + 1] - knots[j]);
      },
      mesh);
}

}  // namespace

TEST_CASE("grunwald-letnikov weights") {
  for (double a : {0.2, 0.5, 0.8}) {
    const auto w = gl_weights(a, 400);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == doctest::Approx(-a).epsilon(1e-15));
    for (std::size_t j = 1; j < w.size(); ++j) CHECK(w[j] < 0.0);
    for (std::size_t j = 2; j < w.size(); ++j) CHECK(std::abs(w[j]) < std::abs(w[j - 1]));
    double partial = 0.0;
    double last = 2.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      partial += w[j];
      CHECK(partial > 0.0);
      CHECK(partial < last);
      CHECK(partial == doctest::Approx(gl_partial_sum_oracle(a, static_cast<int>(j))).epsilon(1e-12));
      last = partial;
    }
  }
  CHECK(gl_weights(0.5, 0).size() == 1);
}

TEST_CASE("l1 weights") {
  const auto b = l1_weights(0.5, 0.1, 10);
  CHECK(b[0] == doctest::Approx(std::pow(0.1, -0.5) / boost::math::tgamma(1.5)).epsilon(1e-15));
  CHECK(b[1] / b[0] == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-13));
  CHECK(b[1] / b[0] == doctest::Approx(0.414214).epsilon(1e-6));
  for (double a : {0.1, 0.3, 0.5, 0.7, 0.9})
    for (double tau : {1e-4, 0.01, 0.5})
      for (std::size_t n : {1u, 64u, 5000u}) {
        const auto w = l1_weights(a, tau, n);
        CHECK(w.size() == n + 1);
        for (std::size_t j = 0; j <= n; ++j) REQUIRE(w[j] > 0.0);
        for (std::size_t j = 1; j <= n; ++j) REQUIRE(w[j] < w[j - 1]);
      }
  CHECK_THROWS_AS(l1_weights(0.5, 0.0, 3), DomainError);
}

TEST_CASE("discrete caputo derivative of simple functions") {
  const TimeMesh mesh{1.0, 32};
  const TimeSeries c = sample([](double) { return 3.5; }, mesh);
  for (auto kind : {CaputoKind::l1, CaputoKind::gl}) {
    const CaputoScheme s(0.4, mesh.tau(), kind, mesh.steps);
    for (int n = 0; n <= mesh.steps; ++n) CHECK(caputo_apply(c, s, n) == 0.0);
  }
  const double g15 = boost::math::tgamma(1.5);
  const double g25 = boost::math::tgamma(2.5);
  CHECK(std::abs(l1_at_end(0.5, 4096, [](double t) { return t; }) - 1.0 / g15) < 1e-3);
  CHECK(std::abs(l1_at_end(0.5, 4096, [](double t) { return t; }) - 1.128379) < 1e-3);
  CHECK(std::abs(l1_at_end(0.5, 4096, [](double t) { return t * t; }) - 2.0 / g25) < 2e-3);
  CHECK(std::abs(l1_at_end(0.5, 4096, [](double t) { return t * t; }) - 1.504506) < 2e-3);
}

TEST_CASE("gl and l1 agree for smooth data") {
  const int M = 4096;
  const TimeMesh mesh{1.0, M};
  const TimeSeries u = sample([](double t) { return t * t; }, mesh);
  const CaputoScheme gl(0.5, mesh.tau(), CaputoKind::gl, M);
  const CaputoScheme l1(0.5, mesh.tau(), CaputoKind::l1, M);
  double worst = 0.0;
  for (int n = 1; n <= M; ++n) worst = std::max(worst, std::abs(caputo_apply(u, gl, n) - caputo_apply(u, l1, n)));
  CHECK(worst < 5e-3);
}

TEST_CASE("caputo_apply is linear") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> N;
  const TimeMesh mesh{1.0, 200};
  TimeSeries u = sample([](double) { return 0.0; }, mesh);
  TimeSeries v = u;
  for (double& x : u.values) x = N(rng);
  for (double& x : v.values) x = N(rng);
  const double a = 1.7;
  const double b = -0.3;
  TimeSeries w = u;
  for (std::size_t i = 0; i < w.size(); ++i) w.values[i] = a * u.values[i] + b * v.values[i];
  for (auto kind : {CaputoKind::l1, CaputoKind::gl}) {
    const CaputoScheme s(0.6, mesh.tau(), kind, mesh.steps);
    for (int n = 1; n <= mesh.steps; ++n) {
      const double lhs = caputo_apply(w, s, n);
      const double rhs = a * caputo_apply(u, s, n) + b * caputo_apply(v, s, n);
      CHECK(std::abs(lhs - rhs) <= 1e-11 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("l1 order on t squared") {
  const double alpha = 0.5;
  const double exact = 2.0 / boost::math::tgamma(3.0 - alpha);
  std::vector<double> err;
  for (int M : {256, 512, 1024, 2048}) err.push_back(std::abs(l1_at_end(alpha, M, [](double t) { return t * t; }) - exact));
  for (std::size_t i = 1; i < err.size(); ++i) {
    const double order = std::log2(err[i - 1] / err[i]);
    CHECK(order >= 2.0 - alpha - 0.2);
    CHECK(order <= 2.0 - alpha + 0.2);
  }
  CHECK(err.back() < 2e-3);
}

TEST_CASE("caputo_apply contract") {
  const TimeMesh mesh{1.0, 8};
  const TimeSeries u = sample([](double t) { return t; }, mesh);
  const CaputoScheme s(0.5, mesh.tau(), CaputoKind::l1, 8);
  CHECK(caputo_apply(u, s, 0) == 0.0);
  CHECK_THROWS_AS(caputo_apply(u, s, 9), ContractError);
  const CaputoScheme short_s(0.5, mesh.tau(), CaputoKind::l1, 3);
  CHECK_THROWS_AS(caputo_apply(u, short_s, 5), ContractError);
  const CaputoScheme other(0.5, 0.3, CaputoKind::l1, 8);
  CHECK_THROWS_AS(caputo_apply(u, other, 2), ContractError);
  CHECK_THROWS_AS(CaputoScheme(1.0, 0.1, CaputoKind::gl, 3), DomainError);
}

TEST_CASE("fundamental identity residual") {
  SUBCASE("linear probe cancels exactly") {
    const TimeMesh mesh{1.0, 128};
    const TimeSeries k = regularized_kernel(0.5, 16, mesh);
    const TimeSeries u = sample([](double t) { return std::sin(5.0 * t) + t; }, mesh);
    for (int n = 1; n <= mesh.steps; ++n)
      CHECK(std::abs(fundamental_identity_residual(u, ConvexProbe::linear(), k, n)) < 1e-12);
  }
  SUBCASE("constant data converges") {
    double prev = 1.0;
    for (int M : {128, 256, 512, 1024}) {
      const TimeMesh mesh{1.0, M};
      const TimeSeries k = regularized_kernel(0.5, 16, mesh);
      const TimeSeries c = sample([](double) { return 0.7; }, mesh);
      const double r = std::abs(fundamental_identity_residual(c, ConvexProbe::half_square(), k, M));
      CHECK(r < prev);
      prev = r;
    }
    CHECK(prev < 1e-4);
  }
  SUBCASE("self-convergence for u = t") {
    for (auto family : {Mollifier::resolvent, Mollifier::exponential}) {
      double prev = 0.0;
      for (int M = 256; M <= 4096; M *= 2) {
        const TimeMesh mesh{1.0, M};
        const TimeSeries k = regularized_kernel(0.5, 16, mesh, family);
        const TimeSeries u = sample([](double t) { return t; }, mesh);
        const double r = std::abs(fundamental_identity_residual(u, ConvexProbe::half_square(), k, M));
        if (M > 256) CHECK(prev / r >= 1.5);
        prev = r;
      }
    }
  }
  SUBCASE("singular kernel is rejected") {
    const TimeMesh mesh{1.0, 16};
    const TimeSeries g = sample_power_kernel(0.5, mesh);
    const TimeSeries u = sample([](double t) { return t; }, mesh);
    CHECK_THROWS_AS(fundamental_identity_residual(u, ConvexProbe::half_square(), g, 4), ContractError);
    const TimeSeries k = regularized_kernel(0.5, 4, mesh);
    CHECK_THROWS_AS(fundamental_identity_residual(u, ConvexProbe::half_square(), k, 0), ContractError);
    CHECK_THROWS_AS(convex_inequality_check(u, g), ContractError);
  }
}

TEST_CASE("convexity inequalities") {
  const TimeMesh mesh{1.0, 128};
  SUBCASE("one-signed data") {
    const TimeSeries k = regularized_kernel(0.5, 64, mesh);
    const TimeSeries pos = sample([](double t) { return 1.0 + std::sin(7.0 * t); }, mesh);
    for (const auto& v : convex_inequality_check(pos, k)) {
      CHECK(v.negative_slack == 0.0);
      CHECK(v.all_ok());
    }
    const TimeSeries neg = sample([](double t) { return -t * (2.0 - t); }, mesh);
    for (const auto& v : convex_inequality_check(neg, k)) {
      CHECK(v.positive_slack == 0.0);
      CHECK(v.all_ok());
    }
  }
  SUBCASE("random piecewise-linear trajectories") {
    for (int m : {4, 64}) {
      std::mt19937_64 rng(2024 + m);
      const TimeSeries k = regularized_kernel(0.5, m, mesh);
      int failures = 0;
      for (int trial = 0; trial < 500; ++trial) {
        const TimeSeries u = random_piecewise_linear(rng, mesh);
        for (const auto& v : convex_inequality_check(u, k)) failures += v.all_ok() ? 0 : 1;
      }
      CHECK(failures == 0);
    }
  }
  SUBCASE("a kernel that rises from zero breaks them") {
    // The remainder term needs -k' >= 0; g_{1-α,m} of the exponential family grows near 0.
    std::mt19937_64 rng(7);
    const TimeSeries k = regularized_kernel(0.5, 4, mesh, Mollifier::exponential);
    int failures = 0;
    for (int trial = 0; trial < 50; ++trial) {
      const TimeSeries u = random_piecewise_linear(rng, mesh);
      for (const auto& v : convex_inequality_check(u, k)) failures += v.all_ok() ? 0 : 1;
    }
    CHECK(failures > 0);
  }
}

TEST_CASE("sign of the derivative at an extremum") {
  const TimeMesh mesh{2.0, 400};
  const TimeSeries hill = sample([](double t) { return t * (2.0 - t); }, mesh);
  const TimeSeries valley = sample([](double t) { return (t - 1.0) * (t - 1.0); }, mesh);
  const TimeSeries flat = sample([](double) { return -2.0; }, mesh);
  for (double a : {0.3, 0.5, 0.9}) {
    const auto top = rl_extremum_sign(hill, a, 200, Extremum::max);
    CHECK(top.pass);
    CHECK(top.value >= 0.0);
    const auto bottom = rl_extremum_sign(valley, a, 200, Extremum::min);
    CHECK(bottom.pass);
    CHECK(bottom.value <= 0.0);
    for (auto mode : {Extremum::max, Extremum::min}) {
      const auto c = rl_extremum_sign(flat, a, 123, mode);
      CHECK(c.value == 0.0);
      CHECK(c.pass);
    }
  }
  // Continuum value at t = 1 for α = 0.5 is 2/Γ(2.5) - 2/Γ(1.5) < 0.
  const double exact = 2.0 / boost::math::tgamma(2.5) - 2.0 / boost::math::tgamma(1.5);
  CHECK(rl_extremum_sign(valley, 0.5, 200, Extremum::min).value == doctest::Approx(exact).epsilon(1e-2));
  CHECK_THROWS_AS(rl_extremum_sign(hill, 0.5, 0, Extremum::max), ContractError);
  CHECK_THROWS_AS(rl_extremum_sign(hill, 0.5, 100, Extremum::min), ContractError);
  CHECK_THROWS_AS(rl_extremum_sign(hill, 0.5, 401, Extremum::max), ContractError);
}

TEST_CASE("extremum sign on random splines") {
  const TimeMesh mesh{1.0, 256};
  int failures = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const TimeSeries u = random_spline_trajectory(mesh, 900 + trial);
    const auto& v = u.values;
    const auto imax = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    const auto imin = static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
    const double alpha = 0.1 + 0.8 * (trial % 9) / 8.0;
    if (imax > 0) failures += rl_extremum_sign(u, alpha, imax, Extremum::max).pass ? 0 : 1;
    if (imin > 0) failures += rl_extremum_sign(u, alpha, imin, Extremum::min).pass ? 0 : 1;
  }
  CHECK(failures == 0);
}
