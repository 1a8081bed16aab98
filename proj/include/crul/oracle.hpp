#pragma once

#include <functional>
#include <string>

#include "crul/protocols.hpp"

namespace crul {

struct IntegrationResult {
    double value = 0.0;
    double error = 0.0; // estimated absolute error
    long evaluations = 0;
};

struct AdaptiveOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_subdivisions = 4000;
    // Number of geometrically shrinking panels laid against the lower limit
    // before adaptive refinement starts.
    int geometric_panels = 24;
};

// Globally adaptive 15-point Gauss-Kronrod integration on a finite interval.
// Throws NumericError (carrying the achieved error) if the subdivision budget runs out.
IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                     const AdaptiveOptions& options = {});

// Which SNR is integrated in the outer loop.
enum class Nesting { OuterPu, OuterSu };

// A 2-D region of the (gamma_s, gamma_p) quadrant together with the integrand
// evaluated on it. Inner limits are closed-form functions of the outer variable
// and may return +infinity.
struct RegionSpec {
    std::string name;
    Nesting nesting = Nesting::OuterPu;
    double outer_lo = 0.0;
    double outer_hi = 0.0;
    std::function<double(double)> inner_lo;
    std::function<double(double)> inner_hi;
    std::function<bool(double gamma_s, double gamma_p)> contains;
    std::function<double(double gamma_s, double gamma_p)> integrand;
};

using Integrand = std::function<double(double gamma_s, double gamma_p)>;

namespace regions {

RegionSpec all(Integrand f);
// gamma_p < theta
RegionSpec pu_outage(double theta, Integrand f);
// theta <= gamma_p < theta (1 + gamma_s)
RegionSpec rsma_split(double theta, Integrand f);
// gamma_p >= theta (1 + gamma_s); also the QoS admission event up to a null set
RegionSpec su_interference_free(double theta, Integrand f);
// theta <= gamma_p < theta (1 + gamma_s) and gamma_s <= (1 + gamma_p)(gamma_p / theta - 1)
RegionSpec sic_pu_first(double theta, Integrand f);
// gamma_p > theta and gamma_s > (1 + gamma_p)(gamma_p / theta - 1)
RegionSpec sic_su_first(double theta, Integrand f);
// Omega(theta, gamma_s) < gamma_p < theta (1 + gamma_s), integrated with gamma_s outermost
RegionSpec omega_upper(double theta, Integrand f);
// theta <= gamma_p <= Omega(theta, gamma_s), integrated with gamma_s outermost
RegionSpec omega_lower(double theta, Integrand f);

} // namespace regions

// gamma_p threshold separating the SIC decoding orders.
double omega(double theta, double gamma_s);
// Largest gamma_s for which the PU is decoded first, (1 + gamma_p)(gamma_p / theta - 1).
double pu_first_su_limit(double theta, double gamma_p);

// E[f 1_region] under independent exponential SNRs.
IntegrationResult restricted_expectation(const RegionSpec& region, double lambda_p, double lambda_s,
                                         double rel_tol = 1e-10);

struct OracleParams {
    double lambda_p = 1.0;
    double lambda_s = 1.0;
    double theta_p = 1.0;
    double bandwidth = 1.0;
    double rel_tol = 1e-10;
};

OracleParams oracle_params(const ScenarioConfig& config, double rel_tol = 1e-10);

// Term-wise restricted expectations of the ergodic-rate decompositions.
struct RsmaTerms {
    IntegrationResult pu_outage, split, interference_free;
    double total() const { return pu_outage.value + split.value + interference_free.value; }
};
struct SicTerms {
    IntegrationResult pu_outage, pu_first, su_first, interference_free;
    double total() const { return pu_outage.value + pu_first.value + su_first.value + interference_free.value; }
};

RsmaTerms rsma_terms_oracle(const OracleParams& p);
SicTerms sic_terms_oracle(const OracleParams& p);

// E[c] of CR-SIC with c the PU-protecting power factor.
IntegrationResult mean_power_factor_oracle(const OracleParams& p);

// Ergodic SU rate of any protocol; normalized CR-SIC rescales lambda_s by the oracle E[c].
IntegrationResult ergodic_rate_oracle(ProtocolKind protocol, const OracleParams& p);

// E[B log2(1 + gamma_s)], the interference-free ceiling.
IntegrationResult interference_free_ceiling_oracle(const OracleParams& p);

} // namespace crul
