#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include <Eigen/Core>

#include "crul/errors.hpp"

namespace crul {

// L_n(x) by the three-term recurrence.
template <typename Scalar>
Scalar laguerre_eval(int n, Scalar x)
{
    if (n < 0) throw DomainError("laguerre_eval: negative degree");
    Scalar prev(1);
    if (n == 0) return prev;
    Scalar cur = Scalar(1) - x;
    for (int k = 1; k < n; ++k) {
        const Scalar next = ((Scalar(2 * k + 1) - x) * cur - Scalar(k) * prev) / Scalar(k + 1);
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace detail {

// Ei(x) = gamma + ln|x| + sum_k x^k / (k k!). Used for |x| <= 1 and for 0 < x <= 40,
// where every term of the sum is positive.
template <typename Scalar>
Scalar ei_series(Scalar x)
{
    constexpr Scalar eps = std::numeric_limits<Scalar>::epsilon();
    Scalar term(1);
    Scalar sum(0);
    for (int k = 1; k < 500; ++k) {
        term *= x / Scalar(k);
        const Scalar contrib = term / Scalar(k);
        sum += contrib;
        if (std::abs(contrib) <= eps * std::abs(sum)) break;
    }
    return std::numbers::egamma_v<Scalar> + std::log(std::abs(x)) + sum;
}

// e^t E1(t) for t > 1 via the modified-Lentz continued fraction.
template <typename Scalar>
Scalar e1_scaled_fraction(Scalar t)
{
    constexpr Scalar eps = std::numeric_limits<Scalar>::epsilon();
    constexpr Scalar tiny = std::numeric_limits<Scalar>::min() / eps;
    Scalar b = t + Scalar(1);
    Scalar c = Scalar(1) / tiny;
    Scalar d = Scalar(1) / b;
    Scalar h = d;
    for (int i = 1; i <= 1000; ++i) {
        const Scalar a = -Scalar(i) * Scalar(i);
        b += Scalar(2);
        d = Scalar(1) / (a * d + b);
        c = b + a / c;
        const Scalar del = c * d;
        h *= del;
        if (std::abs(del - Scalar(1)) <= eps) return h;
    }
    throw NumericError("E1 continued fraction did not converge", static_cast<double>(t));
}

// Ei(x) e^{-x} for large positive x, asymptotic series truncated at its smallest term.
template <typename Scalar>
Scalar ei_scaled_asymptotic(Scalar x)
{
    constexpr Scalar eps = std::numeric_limits<Scalar>::epsilon();
    Scalar term(1);
    Scalar sum(1);
    for (int k = 1; k < 200; ++k) {
        const Scalar next = term * Scalar(k) / x;
        if (std::abs(next) >= std::abs(term)) break;
        term = next;
        sum += term;
        if (term <= eps * sum) break;
    }
    return sum / x;
}

} // namespace detail

// e^t E1(t) for t > 0; finite where E1 itself would underflow.
template <typename Scalar>
Scalar expint_e1_scaled(Scalar t)
{
    if (!(t > Scalar(0))) throw DomainError("expint_e1_scaled requires t > 0");
    if (t <= Scalar(1)) return std::exp(t) * -detail::ei_series(-t);
    return detail::e1_scaled_fraction(t);
}

// E1(t) = -Ei(-t) for t > 0.
template <typename Scalar>
Scalar expint_e1(Scalar t)
{
    if (!(t > Scalar(0))) throw DomainError("expint_e1 requires t > 0");
    if (t <= Scalar(1)) return -detail::ei_series(-t);
    return detail::e1_scaled_fraction(t) * std::exp(-t);
}

// Exponential integral Ei(x), x != 0.
template <typename Scalar>
Scalar expint_ei(Scalar x)
{
    if (x == Scalar(0) || std::isnan(x)) throw DomainError("expint_ei: logarithmic singularity at 0");
    if (x < Scalar(0)) return -expint_e1(-x);
    if (x <= Scalar(40)) return detail::ei_series(x);
    return detail::ei_scaled_asymptotic(x) * std::exp(x);
}

// n-point Gauss-Laguerre rule for the weight e^{-x} on [0, inf).
// Weights are held as logarithms so that w_i e^{mu_i} stays finite for large n.
struct QuadratureRule {
    int order = 0;
    Eigen::ArrayXd nodes;
    Eigen::ArrayXd log_weights;

    Eigen::ArrayXd weights() const { return log_weights.exp(); }
    // w_i e^{mu_i}: weights for integrating a plain function on [0, inf).
    Eigen::ArrayXd unit_weights() const { return (log_weights + nodes).exp(); }
};

// 1 <= n <= 256. Throws NumericError if Newton iteration fails to converge.
QuadratureRule gauss_laguerre(int n);

// Approximates int_0^inf f(x) dx as scale * sum_i w_i e^{mu_i} f(scale mu_i).
double quad_integrate(const QuadratureRule& rule, const std::function<double(double)>& f, double scale = 1.0);

} // namespace crul
