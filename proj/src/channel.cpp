#include "crul/channel.hpp"

#include <cmath>
#include <string>

#include "crul/errors.hpp"

namespace crul {

namespace {

void require_positive_finite(double v, const char* name)
{
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError(std::string(name) + " must be positive and finite, got " + std::to_string(v));
    }
}

} // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double path_loss(double distance_ratio, double u)
{
    require_positive_finite(distance_ratio, "distance ratio");
    require_positive_finite(u, "path loss exponent");
    return std::pow(distance_ratio, -u);
}

double rate_param(const LinkBudget& budget)
{
    validate(budget);
    return 1.0 / (db_to_linear(budget.gamma0_db) * path_loss(budget.distance_ratio, budget.pathloss_exponent));
}

double qos_threshold(double target_rate_ratio)
{
    if (!(target_rate_ratio >= 0.0) || !std::isfinite(target_rate_ratio)) {
        throw DomainError("target rate ratio must be nonnegative and finite");
    }
    return std::exp2(target_rate_ratio) - 1.0;
}

void validate(const LinkBudget& budget)
{
    require_positive_finite(budget.distance_ratio, "distance ratio");
    require_positive_finite(budget.pathloss_exponent, "path loss exponent");
    if (!std::isfinite(budget.gamma0_db)) throw DomainError("gamma0_db must be finite");
    const double lambda =
        1.0 / (db_to_linear(budget.gamma0_db) * std::pow(budget.distance_ratio, -budget.pathloss_exponent));
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw DomainError("link budget yields a degenerate rate parameter");
    }
}

void validate(const ScenarioConfig& config)
{
    validate(config.pu);
    validate(config.su);
    require_positive_finite(config.target_rate_ratio, "target rate ratio");
    require_positive_finite(config.bandwidth, "bandwidth");
}

ScenarioRates derive_rates(const ScenarioConfig& config)
{
    validate(config);
    return {rate_param(config.pu), rate_param(config.su), qos_threshold(config.target_rate_ratio),
            config.bandwidth};
}

ChannelRealization sample_realization(const ScenarioRates& rates, CounterStream& stream)
{
    const double up = stream.next_uniform();
    const double us = stream.next_uniform();
    return {exponential_from_uniform(up, rates.lambda_p), exponential_from_uniform(us, rates.lambda_s)};
}

ChannelRealization sample_realization(const ScenarioConfig& config, CounterStream& stream)
{
    return sample_realization(derive_rates(config), stream);
}

} // namespace crul
