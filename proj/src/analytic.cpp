#include "crul/analytic.hpp"

#include <cmath>
#include <numbers>

#include "crul/errors.hpp"
#include "crul/oracle.hpp"

namespace crul {

namespace {

constexpr double kLn2 = std::numbers::ln2;

double e1s(double t) { return expint_e1_scaled(t); }

bool rates_equal(const AnalyticParams& p)
{
    return std::abs(p.lambda_s - p.lambda_p) < kEqualRateTolerance * std::max(p.lambda_s, p.lambda_p);
}

double rel_dev(double value, double reference)
{
    const double diff = std::abs(value - reference);
    return reference != 0.0 ? diff / std::abs(reference) : diff;
}

// Node stretch for each half-line integral.
double j1_scale(const AnalyticParams& p)
{
    return p.scaling == NodeScaling::Unit ? 1.0 : 1.0 / (p.lambda_s * (1.0 + p.theta_p));
}

double xi_scale(const AnalyticParams& p)
{
    return p.scaling == NodeScaling::Unit ? 1.0 : 1.0 / (p.lambda_s + p.lambda_p * p.theta_p);
}

double su_first_inner_scale(const AnalyticParams& p) { return p.scaling == NodeScaling::Unit ? 1.0 : 1.0 / p.lambda_s; }

// Positive root t of lambda_p t + lambda_s Theta(theta + t) = 1, where the joint
// exponent of the SU-first integrand reaches one.
double su_first_outer_scale(const AnalyticParams& p)
{
    if (p.scaling == NodeScaling::Unit) return 1.0;
    const double a = p.lambda_s / p.theta_p;
    const double b = p.lambda_p + p.lambda_s * (1.0 + p.theta_p) / p.theta_p;
    return 2.0 / (b + std::sqrt(b * b + 4.0 * a));
}

} // namespace

AnalyticParams analytic_params(double lambda_p, double lambda_s, double theta_p, double bandwidth, int n, int m)
{
    for (double v : {lambda_p, lambda_s, theta_p, bandwidth}) {
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("analytic parameters must be positive and finite");
    }
    AnalyticParams p;
    p.lambda_p = lambda_p;
    p.lambda_s = lambda_s;
    p.theta_p = theta_p;
    p.bandwidth = bandwidth;
    p.rule_n = gauss_laguerre(n);
    p.rule_m = m == n ? p.rule_n : gauss_laguerre(m);
    return p;
}

AnalyticParams analytic_params(const ScenarioConfig& config, int n, int m)
{
    const auto r = derive_rates(config);
    return analytic_params(r.lambda_p, r.lambda_s, r.theta_p, r.bandwidth, n, m);
}

// ------------------------------------------------------------------ J1

double phi_z(double z, const AnalyticParams& p, TermForm form)
{
    const double lp = p.lambda_p;
    const double ls = p.lambda_s;
    const double th = p.theta_p;
    const double a = lp + ls * z;
    if (form == TermForm::Printed) {
        return ls * lp * std::exp(-ls * z) / a -
               lp * ls * std::exp(-ls * th) * std::exp(-lp * (1.0 + th) * z) / (a * a) +
               ls * lp * std::exp(-ls * z) / (a * a) -
               lp * ls * (1.0 + th) * std::exp(-lp * th) * std::exp(-ls * (1.0 + th) * z) / a;
    }
    // Same four terms, grouped as (1 - e^{-a theta})(1/a + 1/a^2) - theta e^{-a theta} / a.
    const double u = a * th;
    return lp * ls * std::exp(-ls * z) * (-std::expm1(-u) * (1.0 / a + 1.0 / (a * a)) - th * std::exp(-u) / a);
}

namespace {

// Beyond this ratio of the two decay rates in phi_z the Laguerre nodes no longer
// resolve its pole at z = -lambda_p / lambda_s.
constexpr double kJ1SplitRatio = 8.0;

// J1 with z = (lambda_p / lambda_s)(e^w - 1), which maps dz / a to dw / lambda_s.
double rsma_j1_log_pole(const AnalyticParams& p)
{
    const double lp = p.lambda_p;
    const double ls = p.lambda_s;
    const double th = p.theta_p;
    const double r = lp / ls;
    auto f = [&](double w) {
        const double z = r * std::expm1(w);
        const double a = lp + ls * z;
        const double u = a * th;
        const double bracket = -std::expm1(-u) * (1.0 + 1.0 / a) - th * std::exp(-u);
        return p.bandwidth * std::log1p(z) / kLn2 * lp * std::exp(-ls * z) * bracket;
    };
    // e^{-ls z} is below 1e-300 past ls z = 700.
    const double w_max = std::log1p(700.0 / lp);
    AdaptiveOptions opts;
    opts.rel_tol = 1e-12;
    opts.max_subdivisions = 20000;
    return integrate_adaptive(f, 0.0, w_max, opts).value;
}

} // namespace

double rsma_j1(const AnalyticParams& p, TermForm phi_form)
{
    if (phi_form == TermForm::Derived && p.scaling != NodeScaling::Unit && 1.0 + p.theta_p > kJ1SplitRatio) {
        return rsma_j1_log_pole(p);
    }
    const double s = j1_scale(p);
    const Eigen::ArrayXd x = s * p.rule_n.nodes;
    const Eigen::ArrayXd rate = p.bandwidth * (1.0 + x).log() / kLn2;
    const Eigen::ArrayXd dens = x.unaryExpr([&](double z) { return phi_z(z, p, phi_form); });
    return s * (p.rule_n.unit_weights() * rate * dens).sum();
}

// ------------------------------------------------------------- J2, J3

double c_term(const AnalyticParams& p, TermForm form)
{
    const double lp = p.lambda_p;
    const double ls = p.lambda_s;
    const double th = p.theta_p;
    const double b = p.bandwidth;
    const double beta = ls + lp * th;
    const double kappa = ls * (1.0 + th);

    if (rates_equal(p)) {
        const double lam = lp;
        if (form == TermForm::Printed) {
            const double coeff = b * lam * th / kLn2 + lam * th * (lam * th + 1.0) / (kLn2 * (1.0 + th) * lam);
            return coeff * -std::exp(-lam * th) * e1s(kappa) +
                   b * lam * th * std::exp(-lam * th) / (kLn2 * (1.0 + th) * lam);
        }
        return b / kLn2 * th * std::exp(-lam * th) * (1.0 / (1.0 + th) - lam * e1s(kappa));
    }
    if (form == TermForm::Printed) {
        return b * ls / ((lp - ls) * kLn2) *
               (-std::exp(-lp * th) * e1s(beta) + std::exp(th * lp - 2.0 * th * ls) * e1s(kappa));
    }
    return b / kLn2 * ls * std::exp(-lp * th) * (e1s(kappa) - e1s(beta)) / (lp - ls);
}

double rsma_j2(const AnalyticParams& p, TermForm form, TermForm c_form)
{
    const double lp = p.lambda_p;
    const double ls = p.lambda_s;
    const double th = p.theta_p;
    const double beta = ls + lp * th;
    const double kappa = ls * (1.0 + th);
    const double lead_exp = form == TermForm::Printed ? std::exp(lp * th) : std::exp(-lp * th);
    const double beta_part = -ls * lead_exp * e1s(beta) / beta;
    const double kappa_part = std::exp(-lp * th) * e1s(kappa);
    return p.bandwidth / kLn2 * (beta_part + kappa_part) + c_term(p, c_form);
}

double rsma_j3(const AnalyticParams& p, TermForm form)
{
    const double lp = p.lambda_p;
    const double ls = p.lambda_s;
    const double beta = ls + lp * p.theta_p;
    const double lead_exp = form == TermForm::Printed ? std::exp(-3.0 * lp * p.theta_p) : std::exp(-lp * p.theta_p);
    return p.bandwidth / kLn2 * ls * lead_exp * e1s(beta) / beta;
}

double rsma_j2_j3_theorem_printed(const AnalyticParams& p, TermForm c_form)
{
    const double lp = p.lambda_p;
    const double ls = p.lambda_s;
    const double th = p.theta_p;
    const double beta = ls + lp * th;
    const double kappa = ls * (1.0 + th);
    const double combined = -ls * (std::exp(lp * th) - std::exp(-lp * th)) * e1s(beta) / beta;
    return p.bandwidth / kLn2 * (combined + std::exp(-lp * th) * e1s(kappa)) + c_term(p, c_form);
}

double ergodic_rsma_analytic(const AnalyticParams& p, const TermSelection& sel)
{
    return rsma_j1(p, sel.phi) + rsma_j2(p, sel.rsma_j2, sel.c_term) + rsma_j3(p, sel.rsma_j3);
}

// --------------------------------------------------------------- CR-SIC

double sic_tau(double x, double theta_p)
{
    return 0.5 * (theta_p - 1.0 + std::sqrt((theta_p + 1.0) * (theta_p + 1.0) + 4.0 * theta_p * x));
}

double sic_big_theta(double y, double theta_p) { return (1.0 + y) * (y / theta_p - 1.0); }

double xi(double x, const AnalyticParams& p)
{
    if (x < 0.0) throw DomainError("xi requires x >= 0");
    const double lp = p.lambda_p;
    const double th = p.theta_p;
    const double tau = sic_tau(x, th);
    const double upper = th * (x + 1.0);
    const double bracket = std::log1p(x) * std::exp(-lp * upper) + std::log(th / tau) * std::exp(-lp * tau) +
                           expint_ei(-lp * tau) - expint_ei(-lp * upper);
    return -p.bandwidth * p.lambda_s * std::exp(-p.lambda_s * x) / kLn2 * bracket;
}

double sic_j2(const AnalyticParams& p)
{
    return quad_integrate(p.rule_n, [&](double x) { return xi(x, p); }, xi_scale(p));
}

double sic_j3(const AnalyticParams& p)
{
    const double sx = su_first_inner_scale(p);
    const double sy = su_first_outer_scale(p);
    const auto& rx = p.rule_n;
    const auto& ry = p.rule_m;
    const double lp = p.lambda_p;
    const double ls = p.lambda_s;

    // Psi(x, y) B log2(1 + x/(1+y)) lambda_s lambda_p e^{-lambda_s x - lambda_p y} folded with
    // w_i e^{mu_i} w_j e^{mu_j} in log space.
    Eigen::ArrayXXd terms(rx.order, ry.order);
    for (int j = 0; j < ry.order; ++j) {
        const double y = p.theta_p + sy * ry.nodes[j];
        const double base = sic_big_theta(y, p.theta_p);
        const Eigen::ArrayXd x = base + sx * rx.nodes;
        const Eigen::ArrayXd log_mass = rx.log_weights + rx.nodes - ls * x + (ry.log_weights[j] + ry.nodes[j] - lp * y);
        terms.col(j) = log_mass.exp() * (1.0 + x / (1.0 + y)).log();
    }
    return p.bandwidth / kLn2 * ls * lp * sx * sy * terms.sum();
}

double sic_j4(const AnalyticParams& p) { return rsma_j3(p, TermForm::Derived); }

double ergodic_sic_analytic(const AnalyticParams& p, const TermSelection& sel)
{
    return rsma_j1(p, sel.phi) + sic_j2(p) + sic_j3(p) + sic_j4(p);
}

// ------------------------------------------------------------------ Delta

DeltaBreakdown delta_rate(const AnalyticParams& p, double rel_tol)
{
    const double th = p.theta_p;
    const double b = p.bandwidth;
    auto split = [b, th](double x, double y) { return b * std::log2((1.0 + x + y) / (1.0 + th)); };
    auto reduced = [b, th](double, double y) { return b * std::log2(y / th); };
    auto su_first = [b](double x, double y) { return b * std::log2(1.0 + x / (1.0 + y)); };
    DeltaBreakdown out;
    out.rsma_split = restricted_expectation(regions::rsma_split(th, split), p.lambda_p, p.lambda_s, rel_tol);
    out.pu_first = restricted_expectation(regions::omega_upper(th, reduced), p.lambda_p, p.lambda_s, rel_tol);
    out.su_first = restricted_expectation(regions::omega_lower(th, su_first), p.lambda_p, p.lambda_s, rel_tol);
    return out;
}

// ------------------------------------------------------------ arbitration

ArbitrationReport arbitrate_terms(const AnalyticParams& p, double rel_tol)
{
    const OracleParams op{p.lambda_p, p.lambda_s, p.theta_p, p.bandwidth, rel_tol};
    const auto rsma = rsma_terms_oracle(op);
    const auto sic = sic_terms_oracle(op);

    AnalyticParams unit = p;
    unit.scaling = NodeScaling::Unit;
    AnalyticParams matched = p;
    matched.scaling = NodeScaling::RateMatched;

    ArbitrationReport report;
    report.lambda_p = p.lambda_p;
    report.lambda_s = p.lambda_s;
    report.theta_p = p.theta_p;

    auto add = [&](std::string name, double printed, double derived, double oracle) {
        TermDeviation d{std::move(name), printed, derived, oracle, rel_dev(printed, oracle), rel_dev(derived, oracle), ""};
        // NaN (overflowing printed forms) never wins.
        d.chosen = d.rel_dev_printed < d.rel_dev_derived ? "printed" : "derived";
        report.terms.push_back(d);
        return d.chosen == "printed" ? TermForm::Printed : TermForm::Derived;
    };

    const double c_oracle = rsma.split.value - (rsma_j2(p, TermForm::Derived, TermForm::Derived) - c_term(p));
    report.selection.phi =
        add("rsma.J1[phi_z]", rsma_j1(p, TermForm::Printed), rsma_j1(p, TermForm::Derived), rsma.pu_outage.value);
    const auto j1_nodes = add("rsma.J1[nodes]", rsma_j1(unit), rsma_j1(matched), rsma.pu_outage.value);
    report.selection.c_term = add("rsma.C", c_term(p, TermForm::Printed), c_term(p), c_oracle);
    report.selection.rsma_j2 = add("rsma.J2", rsma_j2(p, TermForm::Printed, TermForm::Printed), rsma_j2(p),
                                   rsma.split.value);
    report.selection.rsma_j3 =
        add("rsma.J3", rsma_j3(p, TermForm::Printed), rsma_j3(p), rsma.interference_free.value);
    add("rsma.J2+J3[theorem]", rsma_j2_j3_theorem_printed(p), rsma_j2(p) + rsma_j3(p),
        rsma.split.value + rsma.interference_free.value);
    const auto sic_j2_nodes = add("sic.J2[nodes]", sic_j2(unit), sic_j2(matched), sic.pu_first.value);
    const auto sic_j3_nodes = add("sic.J3[nodes]", sic_j3(unit), sic_j3(matched), sic.su_first.value);
    add("sic.J4", sic_j4(p), sic_j4(p), sic.interference_free.value);

    // Node scaling follows the majority of the quadrature-term verdicts.
    const int unit_votes = (j1_nodes == TermForm::Printed) + (sic_j2_nodes == TermForm::Printed) +
                           (sic_j3_nodes == TermForm::Printed);
    const AnalyticParams& chosen = unit_votes >= 2 ? unit : matched;
    report.rsma_arbitrated = ergodic_rsma_analytic(chosen, report.selection);
    report.sic_arbitrated = ergodic_sic_analytic(chosen, report.selection);
    report.rsma_oracle = rsma.total();
    report.sic_oracle = sic.total();
    return report;
}

} // namespace crul
