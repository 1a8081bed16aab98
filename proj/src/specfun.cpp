#include "crul/specfun.hpp"

#include <cmath>
#include <string>

namespace crul {

QuadratureRule gauss_laguerre(int n)
{
    if (n < 1 || n > 256) throw DomainError("gauss_laguerre: order must lie in [1, 256]");

    QuadratureRule rule;
    rule.order = n;
    rule.nodes.resize(n);
    rule.log_weights.resize(n);

    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        // Asymptotic starting points, each root extrapolated from the two below it.
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * n);
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * n);
        } else {
            const double ai = i - 1;
            z += (1.0 + 2.55 * ai) / (1.9 * ai) * (z - rule.nodes[i - 2]);
        }

        // Extended precision: in double the recurrence noise exceeds 1e-14 relative beyond n of about 60.
        long double zl = z;
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            long double p_n = 1.0L;
            long double p_nm1 = 0.0L;
            for (int j = 0; j < n; ++j) {
                const long double p_nm2 = p_nm1;
                p_nm1 = p_n;
                p_n = ((2.0L * j + 1.0L - zl) * p_nm1 - j * p_nm2) / (j + 1);
            }
            const long double step = p_n / (n * (p_n - p_nm1) / zl);
            zl -= step;
            if (std::abs(step) < 1e-14L * zl) {
                converged = true;
                break;
            }
        }
        z = static_cast<double>(zl);
        if (!converged || !(z > 0.0)) {
            throw NumericError("gauss_laguerre: Newton iteration failed for root " + std::to_string(i), z);
        }
        if (i > 0 && !(z > rule.nodes[i - 1])) {
            throw NumericError("gauss_laguerre: roots not separated at index " + std::to_string(i), z);
        }
        rule.nodes[i] = z;
        const long double l_next = laguerre_eval<long double>(n + 1, zl);
        rule.log_weights[i] = static_cast<double>(std::log(zl) - 2.0L * std::log(std::abs((n + 1) * l_next)));
    }
    return rule;
}

double quad_integrate(const QuadratureRule& rule, const std::function<double(double)>& f, double scale)
{
    if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("quad_integrate: scale must be positive");
    const Eigen::ArrayXd w = rule.unit_weights();
    double sum = 0.0;
    for (int i = 0; i < rule.order; ++i) {
        const double x = scale * rule.nodes[i];
        const double fx = f(x);
        if (!std::isfinite(fx)) throw NumericError("quad_integrate: non-finite integrand at node", x);
        sum += w[i] * fx;
    }
    return scale * sum;
}

} // namespace crul
