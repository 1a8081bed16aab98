#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "crul/analytic.hpp"
#include "crul/errors.hpp"
#include "crul/montecarlo.hpp"
#include "crul/oracle.hpp"
#include "crul/sweep.hpp"

using namespace crul;

namespace {

McConfig config(std::uint64_t n, unsigned threads = 1, std::uint64_t seed = 0x0c5a2021)
{
    McConfig mc;
    mc.n_samples = n;
    mc.threads = threads;
    mc.seed = seed;
    return mc;
}

ScenarioConfig unit_scenario()
{
    ScenarioConfig s;
    s.pu = {0, 1, 2};
    s.su = {0, 1, 2};
    return s;
}

} // namespace

TEST_CASE("method names")
{
    for (auto m : {Method::Mc, Method::Analytic, Method::Oracle}) CHECK(parse_method(to_string(m)) == m);
    CHECK_FALSE(parse_method("exact").has_value());
}

TEST_CASE("csi benchmark against the oracle")
{
    const auto est = estimate(ProtocolKind::BenchCsi, unit_scenario(), config(1'000'000, 0));
    const double ref = ergodic_rate_oracle(ProtocolKind::BenchCsi, oracle_params(unit_scenario())).value;
    CHECK(std::abs(est.value - ref) <= 3 * est.std_error);
    CHECK(est.n_samples == 1'000'000);
    CHECK(est.method == Method::Mc);
}

TEST_CASE("single draw equals the protocol rate")
{
    const auto s = default_scenario(20, 20);
    const auto rates = derive_rates(s);
    CounterStream stream = CounterStream::for_chunk(77, 0);
    const auto r = sample_realization(rates, stream);
    for (auto k : {ProtocolKind::CrRsma, ProtocolKind::CrSic, ProtocolKind::BenchCsi, ProtocolKind::BenchQos}) {
        const auto est = estimate(k, s, config(1, 1, 77));
        CHECK(est.value == su_rate(k, r, rates.theta_p, rates.bandwidth));
        CHECK(est.std_error == 0.0);
    }
    CHECK(mean_power_factor(s, config(1, 1, 77)).value == sic_power_factor(r, rates.theta_p));
}

TEST_CASE("rsma at the paper operating point")
{
    const auto s = default_scenario(20, 20);
    const auto est = estimate(ProtocolKind::CrRsma, s, config(1'000'000, 0));
    CHECK(std::abs(est.value - ergodic_rsma_analytic(analytic_params(s))) <= 3 * est.std_error);
}

TEST_CASE("mean power factor")
{
    auto s = default_scenario(20, 20);
    s.target_rate_ratio = 1e-9;
    const auto c0 = mean_power_factor(s, config(100'000));
    CHECK(std::abs(c0.value - 1.0) <= std::max(3 * c0.std_error, 1e-6));

    const auto c10 = mean_power_factor(default_scenario(10, 10), config(1'000'000, 0));
    const auto c40 = mean_power_factor(default_scenario(40, 40), config(1'000'000, 0));
    CHECK(c40.value < c10.value);
    CHECK(sic_power_factor({6, 2}, 4.0) == 0.25);

    const auto ref = mean_power_factor_oracle(oracle_params(default_scenario(10, 10))).value;
    CHECK(std::abs(c10.value - ref) <= 3 * c10.std_error);
}

TEST_CASE("event probabilities")
{
    const auto s = default_scenario(20, 20);
    const auto rates = derive_rates(s);
    const std::uint64_t n = 1'000'000;
    const auto ev = event_probabilities(s, config(n, 0));
    const double rsma = ev.at("rsma.pu_outage") + ev.at("rsma.split") + ev.at("rsma.interference_free");
    const double sic = ev.at("sic.pu_outage") + ev.at("sic.pu_first") + ev.at("sic.su_first") + ev.at("sic.interference_free");
    CHECK(rsma == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sic == doctest::Approx(1.0).epsilon(1e-12));

    const double p = -std::expm1(-rates.lambda_p * rates.theta_p);
    CHECK(std::abs(ev.at("rsma.pu_outage") - p) <= 3 * std::sqrt(p * (1 - p) / n));
    CHECK(ev.at("rsma.pu_outage") == ev.at("sic.pu_outage"));

    auto high = s;
    high.target_rate_ratio = std::log2(1e6 + 1.0);
    CHECK(event_probabilities(high, config(100'000)).at("rsma.pu_outage") > 0.999);
}

TEST_CASE("thread count does not change results")
{
    const auto s = default_scenario(25, 25);
    const std::vector<ProtocolKind> ks(kAllProtocols.begin(), kAllProtocols.end());
    auto mc = config(200'003);
    mc.chunk_size = 4096;
    const auto one = estimate_many(ks, s, mc);
    for (unsigned t : {4u, 16u}) {
        mc.threads = t;
        const auto other = estimate_many(ks, s, mc);
        for (std::size_t i = 0; i < ks.size(); ++i) {
            CHECK(other[i].value == one[i].value);
            CHECK(other[i].std_error == one[i].std_error);
        }
    }
    CHECK(one[0].n_samples == 200'003);
}

TEST_CASE("case means add up to the total")
{
    const auto s = default_scenario(20, 20);
    for (auto k : {ProtocolKind::CrRsma, ProtocolKind::CrSic}) {
        const auto cm = case_means(k, s, config(200'000));
        double sum = 0.0;
        for (double c : cm.cases) sum += c;
        CHECK(sum == doctest::Approx(cm.total).epsilon(1e-12));
        CHECK(cm.total == estimate(k, s, config(200'000)).value);
    }
    CHECK_THROWS_AS(case_means(ProtocolKind::BenchCsi, s, config(10)), DomainError);
}

TEST_CASE("stderr scaling")
{
    const auto s = default_scenario(20, 20);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto a = estimate(ProtocolKind::CrRsma, s, config(100'000, 1, seed));
        const auto b = estimate(ProtocolKind::CrRsma, s, config(400'000, 1, seed));
        CHECK(b.std_error / a.std_error == doctest::Approx(0.5).epsilon(0.2));
    }
}

TEST_CASE("normalized cr-sic")
{
    const auto s = default_scenario(20, 20);
    auto mc = config(200'000);
    const double c = mean_power_factor(s, mc).value;
    const auto scaled = normalized_scenario(s, c);
    CHECK(derive_rates(scaled).lambda_s == doctest::Approx(derive_rates(s).lambda_s * c).epsilon(1e-12));
    CHECK_THROWS_AS(normalized_scenario(s, 0.0), DomainError);

    const auto avg = estimate(ProtocolKind::CrSicNormalized, s, mc);
    CHECK(avg.value == estimate(ProtocolKind::CrSic, scaled, mc).value);
    CHECK(avg.value > estimate(ProtocolKind::CrSic, s, mc).value);

    mc.normalization = Normalization::PerRealization;
    const auto per = estimate(ProtocolKind::CrSicNormalized, s, mc);
    CHECK(per.value > 0.0);
    CHECK(per.value != avg.value);
}

TEST_CASE("engine edge cases")
{
    const auto rates = derive_rates(default_scenario(20, 20));
    CHECK_THROWS_AS(run_monte_carlo(rates, config(0), 1, [](const ChannelRealization&, std::span<double>) {}), DomainError);
    auto mc = config(10'000, 4);
    mc.chunk_size = 100;
    CHECK_THROWS_AS(run_monte_carlo(rates, mc, 1,
                                    [](const ChannelRealization& r, std::span<double>) {
                                        if (r.gamma_p > 300) throw std::runtime_error("boom");
                                    }),
                    std::runtime_error);
    mc.chunk_size = 0;
    CHECK_THROWS_AS(run_monte_carlo(rates, mc, 1, [](const ChannelRealization&, std::span<double>) {}), DomainError);

    Moments a, b, all;
    for (int i = 0; i < 10; ++i) {
        (i < 4 ? a : b).push(i * 1.5);
        all.push(i * 1.5);
    }
    a.merge(b);
    CHECK(a.count == all.count);
    CHECK(a.mean == doctest::Approx(all.mean).epsilon(1e-14));
    CHECK(a.variance() == doctest::Approx(all.variance()).epsilon(1e-14));
}
