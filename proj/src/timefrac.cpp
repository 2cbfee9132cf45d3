#include "fracmax/timefrac.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracmax/errors.hpp"

namespace fracmax {

std::vector<double> gl_weights(double alpha, std::size_t n) {
  std::vector<double> w(n + 1);
  w[0] = 1.0;
  for (std::size_t j = 1; j <= n; ++j) w[j] = w[j - 1] * (1.0 - (alpha + 1.0) / static_cast<double>(j));
  return w;
}

std::vector<double> l1_weights(double alpha, double tau, std::size_t n) {
  if (!(tau > 0.0)) throw DomainError("l1_weights: tau must be > 0");
  const double scale = std::pow(tau, -alpha) / std::tgamma(2.0 - alpha);
  const double e = 1.0 - alpha;
  std::vector<double> b(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    // (j+1)^{1-α} - j^{1-α} without cancellation for large j.
    const double jd = static_cast<double>(j);
    b[j] = j == 0 ? scale : scale * std::pow(jd, e) * std::expm1(e * std::log1p(1.0 / jd));
  }
  return b;
}

CaputoScheme::CaputoScheme(double alpha, double tau, CaputoKind kind, std::size_t max_index)
    : alpha_(alpha), tau_(tau), kind_(kind) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("CaputoScheme: alpha must lie in (0, 1)");
  if (!(tau > 0.0)) throw DomainError("CaputoScheme: tau must be > 0");
  weights_ = kind == CaputoKind::l1 ? l1_weights(alpha, tau, max_index) : gl_weights(alpha, max_index);
}

double caputo_apply(const TimeSeries& u, const CaputoScheme& scheme, std::size_t n) {
  if (n >= u.size()) throw ContractError("caputo_apply: index past the end of the series");
  if (n >= scheme.weights().size()) throw ContractError("caputo_apply: scheme too short for index");
  if (std::abs(u.tau - scheme.tau()) > 1e-12 * scheme.tau()) {
    throw ContractError("caputo_apply: series and scheme use different steps");
  }
  const auto& w = scheme.weights();
  const auto& v = u.values;
  double acc = 0.0;
  if (scheme.kind() == CaputoKind::l1) {
    for (std::size_t j = 0; j < n; ++j) acc += w[j] * (v[n - j] - v[n - j - 1]);
    return acc;
  }
  for (std::size_t j = 0; j <= n; ++j) acc += w[j] * (v[n - j] - v[0]);
  return std::pow(scheme.tau(), -scheme.alpha()) * acc;
}

ConvexProbe ConvexProbe::linear() {
  return {[](double y) { return y; }, [](double) { return 1.0; }};
}

ConvexProbe ConvexProbe::half_square() {
  return {[](double y) { return 0.5 * y * y; }, [](double y) { return y; }};
}

ConvexProbe ConvexProbe::half_positive_square() {
  return {[](double y) {
            const double p = std::max(y, 0.0);
            return 0.5 * p * p;
          },
          [](double y) { return std::max(y, 0.0); }};
}

namespace {

void require_regular(const TimeSeries& k, const char* where) {
  for (double v : k.values) {
    if (!std::isfinite(v)) throw ContractError(std::string(where) + ": kernel must be bounded on the mesh");
  }
}

TimeSeries map_series(const TimeSeries& u, const std::function<double(double)>& f) {
  TimeSeries out{u.tau, u.values, {}};
  for (double& v : out.values) v = f(v);
  return out;
}

// (S_n - S_{n-1}) / τ for S = k*w.
double step_derivative(const TimeSeries& conv, std::size_t n) {
  return (conv.values[n] - conv.values[n - 1]) / conv.tau;
}

}  // namespace

double fundamental_identity_residual(const TimeSeries& u, const ConvexProbe& probe,
                                     const TimeSeries& k, std::size_t n) {
  require_regular(k, "fundamental_identity_residual");
  if (n < 1 || n >= u.size()) throw ContractError("fundamental_identity_residual: need 1 <= n <= M");
  const double tau = u.tau;
  const TimeSeries ku = convolve(k, u);
  const TimeSeries kH = convolve(k, map_series(u, probe.value));

  const double un = u.values[n];
  const double Hn = probe.value(un);
  const double dHn = probe.slope(un);

  const double lhs = dHn * step_derivative(ku, n);

  const std::size_t last = k.size() - 1;
  auto dk = [&](std::size_t j) {
    if (j == 0) return (k.values[1] - k.values[0]) / tau;
    if (j >= last) return (k.values[last] - k.values[last - 1]) / tau;
    return (k.values[j + 1] - k.values[j - 1]) / (2.0 * tau);
  };
  double remainder = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double a = u.values[n - j];
    const double bregman = probe.value(a) - Hn - dHn * (a - un);
    const double weight = (j == 0 || j == n) ? 0.5 : 1.0;
    remainder += weight * bregman * -dk(j);
  }
  remainder *= tau;

  const double rhs = step_derivative(kH, n) + (dHn * un - Hn) * k.values[n] + remainder;
  return lhs - rhs;
}

double inequality_tolerance(const TimeSeries& u, const TimeSeries& k) {
  double umax = 0.0;
  for (double v : u.values) umax = std::max(umax, std::abs(v));
  double kl1 = 0.0;
  if (k.has_cell_mass()) {
    for (double w : k.cell_mass) kl1 += std::abs(w);
  } else {
    for (std::size_t j = 0; j + 1 < k.size(); ++j) kl1 += k.tau * std::abs(k.values[j]);
  }
  return 1e-10 * std::max(1.0, umax * umax * kl1);
}

std::vector<InequalityVerdict> convex_inequality_check(const TimeSeries& u, const TimeSeries& k) {
  require_regular(k, "convex_inequality_check");
  if (u.size() < 2) throw ContractError("convex_inequality_check: need at least one step");
  const auto pos = [](double y) { return std::max(y, 0.0); };
  const auto neg = [](double y) { return std::max(-y, 0.0); };

  TimeSeries v = map_series(u, [](double y) { return -y; });
  const TimeSeries ku = convolve(k, u);
  const TimeSeries kv = convolve(k, v);
  const TimeSeries kpos2 = convolve(k, map_series(u, [&](double y) { return pos(y) * pos(y); }));
  const TimeSeries kneg2 = convolve(k, map_series(u, [&](double y) { return neg(y) * neg(y); }));
  const double tol = inequality_tolerance(u, k);

  std::vector<InequalityVerdict> out;
  out.reserve(u.size() - 1);
  for (std::size_t n = 1; n < u.size(); ++n) {
    const double un = u.values[n];
    InequalityVerdict r;
    r.index = n;
    r.positive_slack = pos(un) * step_derivative(ku, n) - 0.5 * step_derivative(kpos2, n);
    // v⁺ = u⁻ and (v⁺)² = (u⁻)².
    r.negated_slack = pos(-un) * step_derivative(kv, n) - 0.5 * step_derivative(kneg2, n);
    r.negative_slack = neg(un) * step_derivative(ku, n) + 0.5 * step_derivative(kneg2, n);
    r.positive_ok = r.positive_slack >= -tol;
    r.negated_ok = r.negated_slack >= -tol;
    r.negative_ok = r.negative_slack <= tol;
    out.push_back(r);
  }
  return out;
}

ExtremumSign rl_extremum_sign(const TimeSeries& u, double alpha, std::size_t n0, Extremum mode,
                              double rel_tol) {
  if (n0 == 0) throw ContractError("rl_extremum_sign: extremum index must be >= 1");
  if (n0 >= u.size()) throw ContractError("rl_extremum_sign: index past the end of the series");
  const double extremal = u.values[n0];
  for (std::size_t j = 0; j <= n0; ++j) {
    const bool beaten = mode == Extremum::max ? u.values[j] > extremal : u.values[j] < extremal;
    if (beaten) throw ContractError("rl_extremum_sign: n0 is not an extremum over 0..n0");
  }
  const CaputoScheme scheme(alpha, u.tau, CaputoKind::l1, n0);
  double umax = 0.0;
  for (double v : u.values) umax = std::max(umax, std::abs(v));
  ExtremumSign r;
  r.value = caputo_apply(u, scheme, n0);
  r.tolerance = rel_tol * std::max(1.0, umax) * scheme.weights()[0];
  r.pass = mode == Extremum::max ? r.value >= -r.tolerance : r.value <= r.tolerance;
  return r;
}

}  // namespace fracmax
