#pragma once

#include <cmath>
#include <cstdint>

#include "crul/rng.hpp"

namespace crul {

// Link budget of one user towards the base station.
struct LinkBudget {
    double gamma0_db = 0.0;         // average received SNR at reference distance d_0
    double distance_ratio = 1.0;    // d_i / d_0
    double pathloss_exponent = 2.0; // u
};

struct ScenarioConfig {
    LinkBudget pu{0.0, 1.0, 2.0};
    LinkBudget su{0.0, 2.0, 2.0};
    double target_rate_ratio = 2.5; // R_P,th / B in bits/s/Hz
    double bandwidth = 1.0;         // B in Hz
};

// Instantaneous received SNRs of one fading draw (linear scale).
struct ChannelRealization {
    double gamma_p = 0.0;
    double gamma_s = 0.0;
};

double db_to_linear(double db);

// (d_i/d_0)^(-u).
double path_loss(double distance_ratio, double u);

// Rate of the exponential received-SNR law, 1 / (gamma_0 * l).
double rate_param(const LinkBudget& budget);

// 2^(R_th/B) - 1.
double qos_threshold(double target_rate_ratio);

// Throws DomainError if the budget or scenario violates its invariants.
void validate(const LinkBudget& budget);
void validate(const ScenarioConfig& config);

struct ScenarioRates {
    double lambda_p;
    double lambda_s;
    double theta_p;
    double bandwidth;
};

ScenarioRates derive_rates(const ScenarioConfig& config);

// Inverse-CDF exponential draw with u in (0, 1].
inline double exponential_from_uniform(double u, double lambda) { return -std::log(u) / lambda; }

// Two uniforms per realization, PU first.
ChannelRealization sample_realization(const ScenarioRates& rates, CounterStream& stream);
ChannelRealization sample_realization(const ScenarioConfig& config, CounterStream& stream);

} // namespace crul
