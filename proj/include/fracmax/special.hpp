#pragma once

#include <functional>

namespace fracmax {

/// 1/Γ(x), finite everywhere (zero at the poles of Γ).
double reciprocal_gamma(double x);

/// Mittag-Leffler function E_α(z) for real z and 0 < α ≤ 1.
///
/// Power series Σ z^k / Γ(αk+1) with term-ratio stopping for z ≥ -10, and the
/// algebraic asymptotic expansion -Σ_{k≥1} z^{-k} / Γ(1-αk) (optimally truncated)
/// for z < -10. α = 1 is evaluated as exp(z). For z < 0 a route that cannot certify
/// about 10 digits (series cancellation: eps·max|term| too large against the sum;
/// asymptotics: first omitted term too large) hands over to mittag_leffler_neg.
/// Throws NumericError when the series for z > 0 overflows or does not settle within
/// 10 000 terms.
double mittag_leffler(double alpha, double z);

/// E_α(-x) for x ≥ 0 and 0 < α < 1 from the completely monotone representation
///
///   E_α(-x) = sin(απ)/(απ) ∫_0^∞ exp(-(u x)^{1/α}) / (u² + 2u cos(απ) + 1) du,
///
/// integrated adaptively. Stable for every x where the series route cancels.
double mittag_leffler_neg(double alpha, double x);

/// sin(απ)/(απ) ∫_0^∞ F(u^{1/α}) / (u² + 2u cos(απ) + 1) du.
///
/// The Laplace-type transform behind mittag_leffler_neg: with F(p) = exp(-p s) it gives
/// E_α(-s^α). F must be bounded on [0, ∞) and decay (or stay bounded) as p → ∞.
double stieltjes_ml_transform(double alpha, const std::function<double(double)>& F);

}  // namespace fracmax
