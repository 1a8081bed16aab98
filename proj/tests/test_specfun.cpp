#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/expint.hpp>

#include "crul/errors.hpp"
#include "crul/specfun.hpp"

using namespace crul;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Golub-Welsch: eigenvalues of the Jacobi matrix of the Laguerre recurrence.
Eigen::VectorXd golub_welsch_nodes(int n)
{
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        j(i, i) = 2.0 * i + 1.0;
        if (i + 1 < n) j(i, i + 1) = j(i + 1, i) = i + 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    return es.eigenvalues();
}

} // namespace

TEST_CASE("laguerre polynomials")
{
    CHECK(laguerre_eval(0, 3.7) == 1.0);
    CHECK(laguerre_eval(1, 3.0) == -2.0);
    CHECK(laguerre_eval(2, 2.0) == doctest::Approx(-1.0));
    CHECK(laguerre_eval<long double>(3, 1.5L) == doctest::Approx((-1.5 * 1.5 * 1.5 + 9 * 1.5 * 1.5 - 18 * 1.5 + 6) / 6));
    CHECK_THROWS_AS(laguerre_eval(-1, 1.0), DomainError);
}

TEST_CASE("small rules")
{
    const auto r1 = gauss_laguerre(1);
    CHECK(r1.nodes[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r1.weights()[0] == doctest::Approx(1.0).epsilon(1e-14));

    const auto r2 = gauss_laguerre(2);
    CHECK(r2.nodes[0] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-14));
    CHECK(r2.nodes[1] == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-14));
    CHECK(r2.weights()[0] == doctest::Approx((2.0 + std::sqrt(2.0)) / 4.0).epsilon(1e-13));
    CHECK(r2.weights()[1] == doctest::Approx((2.0 - std::sqrt(2.0)) / 4.0).epsilon(1e-13));
    const Eigen::ArrayXd w = r2.weights();
    CHECK(rel((w * r2.nodes.cube()).sum(), 6.0) < 1e-10);

    CHECK_THROWS_AS(gauss_laguerre(0), DomainError);
    CHECK_THROWS_AS(gauss_laguerre(257), DomainError);
}

TEST_CASE("rule invariants")
{
    for (int n : {2, 3, 5, 10, 20, 50, 100, 150, 256}) {
        CAPTURE(n);
        const auto r = gauss_laguerre(n);
        REQUIRE(r.nodes[0] > 0.0);
        for (int i = 1; i < n; ++i) REQUIRE(r.nodes[i] > r.nodes[i - 1]);
        CHECK(std::abs(r.weights().sum() - 1.0) < 1e-12);

        const Eigen::VectorXd gw = golub_welsch_nodes(n);
        for (int i = 0; i < n; ++i) REQUIRE(rel(r.nodes[i], gw[i]) < 1e-11);
    }
}

TEST_CASE("moment exactness")
{
    for (int n : {2, 5, 20, 100}) {
        const auto r = gauss_laguerre(n);
        const Eigen::ArrayXd log_mu = r.nodes.log();
        for (int k = 0; k <= 2 * n - 1; ++k) {
            const Eigen::ArrayXd t = r.log_weights + k * log_mu;
            const double top = t.maxCoeff();
            const double log_sum = top + std::log((t - top).exp().sum());
            CAPTURE(n);
            CAPTURE(k);
            REQUIRE(std::abs(std::expm1(log_sum - std::lgamma(k + 1.0))) <= 1e-10);
        }
    }
}

TEST_CASE("quad_integrate")
{
    for (int n : {1, 4, 30, 100}) {
        const auto r = gauss_laguerre(n);
        CHECK(std::abs(quad_integrate(r, [](double x) { return std::exp(-x); }) - 1.0) < 1e-12);
        CHECK(std::abs(quad_integrate(r, [](double x) { return x * std::exp(-x); }) - 1.0) < 1e-10);
    }
    const auto r40 = gauss_laguerre(40);
    CHECK(std::abs(quad_integrate(r40, [](double x) { return std::exp(-2.0 * x); }) - 0.5) < 1e-8);
    // A scale matched to the decay rate makes the same integrand exact.
    CHECK(std::abs(quad_integrate(r40, [](double x) { return std::exp(-2.0 * x); }, 0.5) - 0.5) < 1e-13);
    CHECK_THROWS_AS(quad_integrate(r40, [](double) { return NAN; }), NumericError);
    CHECK_THROWS_AS(quad_integrate(r40, [](double x) { return x; }, 0.0), DomainError);
}

TEST_CASE("exponential integral values")
{
    CHECK(expint_ei(-1.0) == doctest::Approx(-0.2193839343).epsilon(1e-10));
    CHECK(expint_ei(-0.5) == doctest::Approx(-0.5597735948).epsilon(1e-10));
    for (double x : {0.1, 1.0, 10.0}) CHECK(rel(expint_ei(-x), -expint_e1(x)) <= 1e-12);
    CHECK_THROWS_AS(expint_ei(0.0), DomainError);
    CHECK_THROWS_AS(expint_e1(-1.0), DomainError);
}

TEST_CASE("exponential integral against boost")
{
    for (double x : {1e-8, 1e-4, 0.1, 0.5, 0.999, 1.0, 1.001, 2.0, 5.0, 20.0, 100.0, 500.0}) {
        CAPTURE(x);
        CHECK(rel(expint_ei(-x), boost::math::expint(-x)) < 1e-13);
        CHECK(rel(expint_e1_scaled(x), std::exp(x) * boost::math::expint(1, x)) < 1e-12);
    }
    for (double x : {1e-6, 0.3, 1.0, 7.0, 39.9, 40.1, 80.0, 300.0}) {
        CAPTURE(x);
        CHECK(rel(expint_ei(x), boost::math::expint(x)) < 1e-13);
    }
    // Far tail: E1 underflows, the scaled form does not.
    CHECK(expint_e1_scaled(1e6) == doctest::Approx(1.0 / (1e6 + 1.0)).epsilon(1e-11));
}

TEST_CASE("exponential integral derivative and monotonicity")
{
    for (double x : {-5.0, -1.0, -0.1}) {
        const double h = 1e-6;
        const double fd = (expint_ei(x + h) - expint_ei(x - h)) / (2.0 * h);
        CHECK(rel(fd, std::exp(x) / x) < 1e-6);
    }
    // The derivative e^x/x is negative: Ei falls on (-inf, 0), so Ei(-x) rises with x.
    double prev = expint_ei(-1e-6);
    for (double x = 0.01; x <= 50.0; x += 0.01) {
        const double cur = expint_ei(-x);
        REQUIRE(cur > prev);
        prev = cur;
    }
}

TEST_CASE("long double instantiation")
{
    CHECK(std::abs(static_cast<double>(expint_ei(-1.0L)) - expint_ei(-1.0)) < 1e-15);
}
