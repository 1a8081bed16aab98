#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "crul/channel.hpp"
#include "crul/errors.hpp"

using namespace crul;

TEST_CASE("path loss")
{
    CHECK(path_loss(1, 2) == doctest::Approx(1.0));
    CHECK(path_loss(2, 2) == doctest::Approx(0.25));
    CHECK(path_loss(4, 3) == doctest::Approx(0.015625));
    CHECK_THROWS_AS(path_loss(0, 2), DomainError);
    CHECK_THROWS_AS(path_loss(1, -1), DomainError);
}

TEST_CASE("rate parameter")
{
    CHECK(rate_param({0, 1, 2}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rate_param({20, 2, 2}) == doctest::Approx(0.04).epsilon(1e-14));
    CHECK(rate_param({10, 1, 2}) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK_THROWS_AS(rate_param({NAN, 1, 2}), DomainError);
}

TEST_CASE("qos threshold")
{
    CHECK(qos_threshold(1) == 1.0);
    CHECK(qos_threshold(2.5) == doctest::Approx(4.656854249492381).epsilon(1e-15));
    CHECK(qos_threshold(0) == 0.0);
    CHECK_THROWS_AS(qos_threshold(-1), DomainError);
}

TEST_CASE("scenario validation")
{
    ScenarioConfig s;
    CHECK_NOTHROW(validate(s));
    s.target_rate_ratio = 0;
    CHECK_THROWS_AS(validate(s), DomainError);
    s = {};
    s.bandwidth = -1;
    CHECK_THROWS_AS(validate(s), DomainError);
    s = {};
    s.su.distance_ratio = 0;
    CHECK_THROWS_AS(derive_rates(s), DomainError);
}

TEST_CASE("inverse cdf")
{
    CHECK(exponential_from_uniform(std::exp(-1.0), 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(exponential_from_uniform(1.0, 0.37) == 0.0);
}

TEST_CASE("uniform stream stays in (0, 1]")
{
    CounterStream s(123);
    for (int i = 0; i < 100000; ++i) {
        const double u = s.next_uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u <= 1.0);
    }
}

namespace {

std::vector<double> draw_pu(double lambda, int n, std::uint64_t seed)
{
    const ScenarioRates rates{lambda, 1.0, 1.0, 1.0};
    CounterStream stream = CounterStream::for_chunk(seed, 0);
    std::vector<double> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(sample_realization(rates, stream).gamma_p);
    return out;
}

} // namespace

TEST_CASE("sample mean and ks statistic")
{
    const int n = 1'000'000;
    const double lambda = 0.04;
    auto xs = draw_pu(lambda, n, 99);
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    // The exponential's standard deviation equals its mean.
    CHECK(std::abs(mean - 25.0) < 3.0 * 25.0 / 1e3);

    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        const double cdf = -std::expm1(-lambda * xs[i]);
        ks = std::max({ks, std::abs(cdf - double(i) / n), std::abs(cdf - double(i + 1) / n)});
    }
    CHECK(ks < 0.002);
}

TEST_CASE("su mean")
{
    ScenarioConfig s;
    s.su = {20, 2, 2};
    const auto rates = derive_rates(s);
    CounterStream stream = CounterStream::for_chunk(5, 3);
    double sum = 0.0;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i) sum += sample_realization(rates, stream).gamma_s;
    CHECK(std::abs(sum / n - 25.0) < 4.0 * 25.0 / 1e3);
}

TEST_CASE("seeded streams are reproducible")
{
    CHECK(draw_pu(1.0, 1000, 7) == draw_pu(1.0, 1000, 7));
    CHECK(draw_pu(1.0, 1000, 7) != draw_pu(1.0, 1000, 8));
    CHECK(CounterStream::for_chunk(7, 0).next_u64() != CounterStream::for_chunk(7, 1).next_u64());
}
