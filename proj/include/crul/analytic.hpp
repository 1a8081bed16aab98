#pragma once

#include <string>
#include <vector>

#include "crul/channel.hpp"
#include "crul/oracle.hpp"
#include "crul/specfun.hpp"

namespace crul {

// How Gauss-Laguerre nodes are mapped onto each half-line integral.
//  Unit        - raw nodes, w_i e^{mu_i} f(mu_i).
//  RateMatched - nodes stretched by the integrand's leading exponential length.
enum class NodeScaling { RateMatched, Unit };

// Which rendering of a closed-form term to evaluate.
//  Printed - the expression exactly as published.
//  Derived - the expression re-derived from the defining integral.
enum class TermForm { Derived, Printed };

struct TermSelection {
    TermForm phi = TermForm::Derived;
    TermForm rsma_j2 = TermForm::Derived;
    TermForm rsma_j3 = TermForm::Derived;
    TermForm c_term = TermForm::Derived;
};

struct AnalyticParams {
    double lambda_p = 1.0;
    double lambda_s = 1.0;
    double theta_p = 1.0;
    double bandwidth = 1.0;
    QuadratureRule rule_n; // n nodes: gamma_s-side sums
    QuadratureRule rule_m; // m nodes: gamma_p-side sum of the double quadrature
    NodeScaling scaling = NodeScaling::RateMatched;
};

AnalyticParams analytic_params(const ScenarioConfig& config, int n = 100, int m = 100);
AnalyticParams analytic_params(double lambda_p, double lambda_s, double theta_p, double bandwidth, int n = 100,
                               int m = 100);

// Defective density of gamma_s / (1 + gamma_p) on the event gamma_p < theta_p.
double phi_z(double z, const AnalyticParams& p, TermForm form = TermForm::Derived);

// The C-term of the split-region closed form (equal / unequal rate branches).
double c_term(const AnalyticParams& p, TermForm form = TermForm::Derived);

// Relative tolerance at which lambda_s counts as equal to lambda_p.
inline constexpr double kEqualRateTolerance = 1e-9;

// CR-RSMA terms: J1 on gamma_p < theta, J2 on the split event, J3 interference-free.
double rsma_j1(const AnalyticParams& p, TermForm phi_form = TermForm::Derived);
double rsma_j2(const AnalyticParams& p, TermForm form = TermForm::Derived, TermForm c_form = TermForm::Derived);
double rsma_j3(const AnalyticParams& p, TermForm form = TermForm::Derived);
// J2 + J3 with the combined exponential prefactor as it appears in the published theorem
// (its C-term follows c_form).
double rsma_j2_j3_theorem_printed(const AnalyticParams& p, TermForm c_form = TermForm::Printed);

double ergodic_rsma_analytic(const AnalyticParams& p, const TermSelection& sel = {});

// tau(x): gamma_p level above which SIC decodes the PU first for gamma_s = x.
double sic_tau(double x, double theta_p);
// Theta(y) = (1 + y)(y / theta - 1).
double sic_big_theta(double y, double theta_p);

// Inner gamma_p integral of the PU-first term, times the gamma_s density at x.
double xi(double x, const AnalyticParams& p);

double sic_j2(const AnalyticParams& p);
double sic_j3(const AnalyticParams& p);
double sic_j4(const AnalyticParams& p);

double ergodic_sic_analytic(const AnalyticParams& p, const TermSelection& sel = {});

// Delta = C_R - C_S from the three restricted expectations of the Omega split.
struct DeltaBreakdown {
    IntegrationResult rsma_split;   // E[B log2((1+s+p)/(1+theta)); theta <= p < theta(1+s)]
    IntegrationResult pu_first;     // E[B log2(p/theta); Omega < p < theta(1+s)]
    IntegrationResult su_first;     // E[B log2(1 + s/(1+p)); theta <= p <= Omega]
    double value() const { return rsma_split.value - pu_first.value - su_first.value; }
};
DeltaBreakdown delta_rate(const AnalyticParams& p, double rel_tol = 1e-10);

// Term-wise agreement of the closed forms with their restricted-expectation oracles.
struct TermDeviation {
    std::string term;
    double printed = 0.0;
    double derived = 0.0;
    double oracle = 0.0;
    double rel_dev_printed = 0.0;
    double rel_dev_derived = 0.0;
    std::string chosen; // "derived" or "printed"
};

struct ArbitrationReport {
    double lambda_p = 0.0, lambda_s = 0.0, theta_p = 0.0;
    std::vector<TermDeviation> terms;
    TermSelection selection;
    double rsma_arbitrated = 0.0;
    double sic_arbitrated = 0.0;
    double rsma_oracle = 0.0;
    double sic_oracle = 0.0;
};

ArbitrationReport arbitrate_terms(const AnalyticParams& p, double rel_tol = 1e-10);

} // namespace crul
