#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "crul/analytic.hpp"
#include "crul/oracle.hpp"
#include "crul/sweep.hpp"

using namespace crul;

namespace {

const double kTheta = qos_threshold(2.5);

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double csi_oracle(double lp, double ls, double th)
{
    return ergodic_rate_oracle(ProtocolKind::BenchCsi, {lp, ls, th, 1.0, 1e-10}).value;
}

// Pr{gamma_s < z (gamma_p + 1), gamma_p < theta}.
double phi_cdf(double z, double lp, double ls, double th)
{
    return integrate_adaptive(
               [&](double y) { return lp * std::exp(-lp * y) * -std::expm1(-ls * z * (y + 1.0)); }, 0.0, th,
               {1e-13, 0.0, 4000, 0})
        .value;
}

} // namespace

TEST_CASE("phi_z is the defective density of the outage-case SINR")
{
    for (auto [lp, ls] : {std::pair{1.0, 1.0}, {0.01, 0.04}, {2.0, 0.3}}) {
        const auto p = analytic_params(lp, ls, kTheta, 1.0);
        // Total mass; the tail decays at rate lambda_s.
        AdaptiveOptions o;
        o.rel_tol = 1e-10;
        o.max_subdivisions = 20000;
        const double m = integrate_adaptive([&](double z) { return phi_z(z, p); }, 0.0, 80.0 / ls, o).value;
        CHECK(std::abs(m - (-std::expm1(-lp * kTheta))) < 1e-6);
        for (double z : {0.0, 0.5, 1.0, 3.0}) REQUIRE(phi_z(z, p) >= 0.0);
    }
    const auto unit = analytic_params(1.0, 1.0, 4.657, 1.0);
    const double h = 1e-4;
    const double fd = (phi_cdf(1 + h, 1, 1, 4.657) - phi_cdf(1 - h, 1, 1, 4.657)) / (2 * h);
    CHECK(std::abs(phi_z(1.0, unit) - fd) < 1e-6);
    CHECK(phi_z(1e3, unit) < 1e-300);

    // The printed variant disagrees once the two rates differ.
    const auto p = analytic_params(0.01, 0.04, kTheta, 1.0);
    CHECK(rel(phi_z(1.0, p, TermForm::Printed), phi_z(1.0, p)) > 1e-3);
}

TEST_CASE("c_term")
{
    const double lp = 0.3;
    const double eq = c_term(analytic_params(lp, lp, kTheta, 1.0));
    const double lo = c_term(analytic_params(lp, lp * (1 - 1e-6), kTheta, 1.0));
    const double hi = c_term(analytic_params(lp, lp * (1 + 1e-6), kTheta, 1.0));
    CHECK(std::min(lo, hi) <= eq);
    CHECK(eq <= std::max(lo, hi));
    CHECK(std::abs(hi - lo) < 1e-5 * std::abs(eq));

    const auto unit = analytic_params(1.0, 1.0, 1.0, 1.0);
    const auto report = arbitrate_terms(unit);
    const auto it = std::find_if(report.terms.begin(), report.terms.end(),
                                 [](const TermDeviation& t) { return t.term == "rsma.C"; });
    REQUIRE(it != report.terms.end());
    CHECK(it->rel_dev_derived < 1e-4);

    CHECK(std::abs(c_term(analytic_params(1.0, 1.0, 1e-9, 1.0))) < 1e-6);
    CHECK(std::abs(c_term(analytic_params(0.2, 0.7, 1e-9, 1.0))) < 1e-6);
}

TEST_CASE("xi")
{
    const auto p = analytic_params(1.0, 1.0, 4.0, 1.0);
    CHECK(xi(0.0, p) == doctest::Approx(0.0));
    const double x = 2.0;
    const double lo = sic_tau(x, 4.0);
    const double ref = integrate_adaptive([](double y) { return std::log2(y / 4.0) * std::exp(-y); }, lo, 4.0 * (x + 1),
                                          {1e-13, 0.0, 4000, 0})
                           .value *
                       std::exp(-x);
    CHECK(std::abs(xi(x, p) - ref) < 1e-8);
    for (double v = 0.0; v < 200.0; v += 0.37) REQUIRE(xi(v, p) >= 0.0);
}

TEST_CASE("paper operating point")
{
    const auto scenario = default_scenario(20, 20);
    const auto p = analytic_params(scenario);
    const auto op = oracle_params(scenario);
    CHECK(rel(ergodic_rsma_analytic(p), ergodic_rate_oracle(ProtocolKind::CrRsma, op).value) < 1e-3);
    CHECK(rel(ergodic_sic_analytic(p), ergodic_rate_oracle(ProtocolKind::CrSic, op).value) < 1e-3);
    CHECK(delta_rate(p).value() > 0.0);
}

TEST_CASE("term-wise agreement over the sweep grid")
{
    for (double g = 0; g <= 40; g += 5) {
        CAPTURE(g);
        const auto report = arbitrate_terms(analytic_params(default_scenario(g, g)));
        for (const auto& t : report.terms) {
            CAPTURE(t.term);
            CHECK(t.rel_dev_derived < 1e-3);
            // Where the printed form coincides with the derived one either may win.
            CHECK(std::min(t.rel_dev_derived, t.rel_dev_printed) ==
                  (t.chosen == "derived" ? t.rel_dev_derived : t.rel_dev_printed));
        }
        CHECK(rel(report.rsma_arbitrated, report.rsma_oracle) < 1e-3);
        CHECK(rel(report.sic_arbitrated, report.sic_oracle) < 1e-3);
    }
}

TEST_CASE("rate-matched nodes are needed at high snr")
{
    auto p = analytic_params(default_scenario(40, 40));
    const double oracle = ergodic_rate_oracle(ProtocolKind::CrSic, oracle_params(default_scenario(40, 40))).value;
    const double matched = rel(ergodic_sic_analytic(p), oracle);
    p.scaling = NodeScaling::Unit;
    const double unit = rel(ergodic_sic_analytic(p), oracle);
    CHECK(matched < 1e-5);
    CHECK(unit > 10 * matched);
}

TEST_CASE("node-count convergence")
{
    for (double g : {0.0, 20.0, 40.0}) {
        const auto s = default_scenario(g, g);
        const auto a = analytic_params(s, 100, 100);
        const auto b = analytic_params(s, 120, 120);
        CAPTURE(g);
        CHECK(rel(ergodic_rsma_analytic(a), ergodic_rsma_analytic(b)) < 1e-6);
        CHECK(rel(ergodic_sic_analytic(a), ergodic_sic_analytic(b)) < 1e-6);
    }
}

TEST_CASE("J1 stays accurate when the two decay rates separate")
{
    for (double th : {10.0, 100.0, 1e3, 1e5}) {
        for (double ls : {1.0, 1e-2, 1e-4}) {
            CAPTURE(th);
            CAPTURE(ls);
            const double lp = ls / 4;
            const auto p = analytic_params(lp, ls, th, 1.0);
            const OracleParams op{lp, ls, th, 1.0, 1e-10};
            CHECK(rel(rsma_j1(p), rsma_terms_oracle(op).pu_outage.value) < 1e-8);
        }
    }
}

TEST_CASE("limits")
{
    // Nothing is ever admitted: both protocols reduce to SU decoded against full PU interference.
    {
        const double lp = 0.01, ls = 0.04, th = 1e4;
        const auto p = analytic_params(lp, ls, th, 1.0);
        const double ref = csi_oracle(lp, ls, th);
        CHECK(rel(ergodic_rsma_analytic(p), ref) < 1e-3);
    }
    // SU silent.
    {
        const auto p = analytic_params(0.01, 1e8, kTheta, 1.0);
        CHECK(std::abs(ergodic_rsma_analytic(p)) < 1e-6);
        CHECK(std::abs(ergodic_sic_analytic(p)) < 1e-6);
    }
    // PU silent.
    {
        const double lp = 1e3, ls = 0.04;
        const auto p = analytic_params(lp, ls, kTheta, 1.0);
        const double ref = csi_oracle(lp, ls, kTheta);
        CHECK(std::abs(ergodic_rsma_analytic(p) - ref) < 1e-2);
        CHECK(std::abs(ergodic_sic_analytic(p) - ref) < 1e-2);
    }
    // Vanishing threshold: no power reduction region.
    {
        // The oracle's inner absolute floor of 1e-17 sets how small theta can go.
        const auto p = analytic_params(0.01, 0.04, 1e-5, 1.0);
        CHECK(std::abs(delta_rate(p).value()) < 1e-6);
    }
}

TEST_CASE("delta matches the oracle difference and dominance holds")
{
    for (auto [lp, ls] : {std::pair{1.0, 1.0}, {0.01, 0.04}, {0.1, 0.01}, {1e-3, 1.0}, {0.5, 5e-4}}) {
        CAPTURE(lp);
        CAPTURE(ls);
        const auto p = analytic_params(lp, ls, kTheta, 1.0);
        const OracleParams op{lp, ls, kTheta, 1.0, 1e-10};
        const double d = delta_rate(p).value();
        const double diff = ergodic_rate_oracle(ProtocolKind::CrRsma, op).value - ergodic_rate_oracle(ProtocolKind::CrSic, op).value;
        CHECK(std::abs(d - diff) < 1e-6);
        CHECK(d >= 0.0);
        CHECK(ergodic_rsma_analytic(p) - ergodic_sic_analytic(p) >= -1e-6);

        const double p_split = restricted_expectation(regions::rsma_split(kTheta, [](double, double) { return 1.0; }), lp, ls).value;
        if (p_split > 0.01) CHECK(d > 0.0);
    }
}

TEST_CASE("analytic against monte carlo over the figure-2 grid")
{
    McConfig mc;
    mc.n_samples = 1'000'000;
    for (double g = 0; g <= 40; g += 2) {
        CAPTURE(g);
        const auto s = default_scenario(g, g);
        const auto p = analytic_params(s);
        const ProtocolKind ks[] = {ProtocolKind::CrRsma, ProtocolKind::CrSic};
        const auto est = estimate_many(ks, s, mc);
        CHECK(std::abs(est[0].value - ergodic_rsma_analytic(p)) <= 3 * est[0].std_error);
        CHECK(std::abs(est[1].value - ergodic_sic_analytic(p)) <= 3 * est[1].std_error);
    }
}
