#include "crul/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>

#include <fmt/format.h>
#include <json.hpp>

#include "crul/oracle.hpp"
#include "crul/specfun.hpp"
#include "crul/sweep.hpp"

namespace crul {

namespace {

const std::vector<double> kFigure2Grid{0, 5, 10, 15, 20, 25, 30, 35, 40};

McConfig mc_config(const ValidationOptions& o, std::uint64_t n_samples)
{
    McConfig mc;
    mc.n_samples = n_samples;
    mc.seed = o.seed;
    mc.threads = o.threads;
    return mc;
}

// Oracle values along the Figure-2 grid, shared by several checks.
struct GridOracle {
    std::map<ProtocolKind, double> rate;
    double mean_c = 0.0;
};

class OracleCache {
public:
    explicit OracleCache(double rel_tol) : rel_tol_(rel_tol) {}

    const GridOracle& at(double gamma0_db)
    {
        auto it = cache_.find(gamma0_db);
        if (it != cache_.end()) return it->second;
        const auto op = oracle_params(default_scenario(gamma0_db, gamma0_db), rel_tol_);
        GridOracle g;
        for (ProtocolKind k : kAllProtocols) g.rate[k] = ergodic_rate_oracle(k, op).value;
        g.mean_c = mean_power_factor_oracle(op).value;
        return cache_.emplace(gamma0_db, std::move(g)).first->second;
    }

private:
    double rel_tol_;
    std::map<double, GridOracle> cache_;
};

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

CheckResult check_quadrature()
{
    CheckResult c{1, "quadrature", false, 0.0, 1e-10, 0.0, 1.0, ""};
    double worst = 0.0;
    int worst_n = 0;
    int worst_k = 0;
    for (int n : {2, 5, 20, 100}) {
        const auto rule = gauss_laguerre(n);
        const Eigen::ArrayXd log_mu = rule.nodes.log();
        for (int k = 0; k <= 2 * n - 1; ++k) {
            // log sum_i w_i mu_i^k against log k!, both in log space.
            const Eigen::ArrayXd terms = rule.log_weights + k * log_mu;
            const double top = terms.maxCoeff();
            const double log_sum = top + std::log((terms - top).exp().sum());
            const double err = std::abs(std::expm1(log_sum - std::lgamma(k + 1.0)));
            if (err > worst) {
                worst = err;
                worst_n = n;
                worst_k = k;
            }
        }
    }
    c.measured = worst;
    c.passed = worst <= c.tolerance;
    c.detail = fmt::format("worst at n={} k={}", worst_n, worst_k);
    return c;
}

CheckResult check_special_functions()
{
    CheckResult c{2, "special-functions", false, 0.0, 1e-10, 0.0, 1.0, ""};
    double worst = 0.0;
    double worst_identity = 0.0;
    for (double x : {1e-4, 0.1, 0.5, 1.0, 5.0, 20.0, 100.0}) {
        const double ei = expint_ei(-x);
        worst = std::max(worst, rel_diff(ei, -e1_reference(x)));
        worst_identity = std::max(worst_identity, rel_diff(ei, -expint_e1(x)));
    }
    c.measured = worst;
    c.passed = worst <= c.tolerance && worst_identity <= 1e-12;
    c.detail = fmt::format("identity Ei(-x)=-E1(x) max rel {:.3g} (tolerance 1e-12)", worst_identity);
    return c;
}

CheckResult check_pu_protection(const ValidationOptions& o)
{
    CheckResult c{3, "pu-protection", false, 0.0, 0.0, 0.0, 30.0, ""};
    double violations = 0.0;
    std::string detail;
    for (double g : {10.0, 20.0, 30.0}) {
        const auto scenario = default_scenario(g, g);
        const auto rates = derive_rates(scenario);
        const double target = rates.bandwidth * std::log2(1.0 + rates.theta_p) - 1e-9;
        const auto m = run_monte_carlo(rates, mc_config(o, o.n_samples), 2,
                                       [&](const ChannelRealization& r, std::span<double> out) {
                                           const bool active = r.gamma_p >= rates.theta_p;
                                           const auto rs = rsma_outcome(r, rates.theta_p, rates.bandwidth);
                                           const auto sc = sic_rates(r, rates.theta_p, rates.bandwidth);
                                           out[0] = active && (rs.rate_pu < target || !rs.pu_protected);
                                           out[1] = active && (sc.rate_pu < target || !sc.pu_protected);
                                       });
        const double v_r = std::round(m[0].mean * static_cast<double>(m[0].count));
        const double v_s = std::round(m[1].mean * static_cast<double>(m[1].count));
        violations += v_r + v_s;
        detail += fmt::format("{}dB:rsma={},sic={} ", g, v_r, v_s);
    }
    c.measured = violations;
    c.passed = violations == 0.0;
    c.detail = detail + fmt::format("over {} draws each", o.n_samples);
    return c;
}

CheckResult check_proposition(const ValidationOptions& o)
{
    CheckResult c{4, "rsma-dominates-sic", false, 0.0, 0.0, 0.0, 30.0, ""};
    double violations = 0.0;
    std::string detail;
    for (double g : {10.0, 20.0, 30.0}) {
        const auto scenario = default_scenario(g, g);
        const auto rates = derive_rates(scenario);
        const double th = rates.theta_p;
        const auto m = run_monte_carlo(rates, mc_config(o, o.n_samples), 2,
                                       [&](const ChannelRealization& r, std::span<double> out) {
                                           const double d = rsma_outcome(r, th, rates.bandwidth).rate_su -
                                                            sic_rates(r, th, rates.bandwidth).rate_su;
                                           const bool split = r.gamma_p >= th && r.gamma_p < th * (1.0 + r.gamma_s);
                                           out[0] = d < -1e-12;
                                           out[1] = split && !(d > 0.0);
                                       });
        const double weak = std::round(m[0].mean * static_cast<double>(m[0].count));
        const double strict = std::round(m[1].mean * static_cast<double>(m[1].count));
        violations += weak + strict;
        detail += fmt::format("{}dB:weak={},strict={} ", g, weak, strict);
    }

    double min_delta = INFINITY;
    for (double g : kFigure2Grid) {
        const auto ap = analytic_params(default_scenario(g, g), o.nodes, o.nodes);
        min_delta = std::min(min_delta, delta_rate(ap, o.oracle_rel_tol).value());
    }
    c.measured = violations;
    c.passed = violations == 0.0 && min_delta >= -1e-6;
    c.detail = detail + fmt::format("min oracle delta {:.6g} (tolerance -1e-6)", min_delta);
    return c;
}

CheckResult check_analytic(const ValidationOptions& o, std::vector<GridPointArbitration>& out)
{
    CheckResult c{5, "analytic-vs-oracle", false, 0.0, 1e-3, 0.0, 60.0, ""};
    double worst = 0.0;
    int flagged = 0;
    for (double g : kFigure2Grid) {
        const auto ap = analytic_params(default_scenario(g, g), o.nodes, o.nodes);
        auto report = arbitrate_terms(ap, o.oracle_rel_tol);
        worst = std::max({worst, rel_diff(report.rsma_arbitrated, report.rsma_oracle),
                          rel_diff(report.sic_arbitrated, report.sic_oracle)});
        for (const auto& t : report.terms) flagged += t.rel_dev_printed > 0.01;
        out.push_back({g, std::move(report)});
    }
    c.measured = worst;
    c.passed = worst <= c.tolerance;
    c.detail = fmt::format("{} as-printed term evaluations deviate >1%", flagged);
    return c;
}

CheckResult check_monte_carlo(const ValidationOptions& o, OracleCache& oracle)
{
    CheckResult c{6, "mc-vs-oracle", false, 0.0, 3.0, 0.0, 120.0, ""};
    const std::vector<ProtocolKind> protocols(kAllProtocols.begin(), kAllProtocols.end());
    double worst = 0.0;
    std::string where;
    for (double g : kFigure2Grid) {
        const auto est = estimate_many(protocols, default_scenario(g, g), mc_config(o, o.n_samples));
        const auto& ref = oracle.at(g);
        for (const auto& e : est) {
            const double z = std::abs(e.value - ref.rate.at(e.protocol)) / e.std_error;
            if (z > worst) {
                worst = z;
                where = fmt::format("{} at {}dB", to_string(e.protocol), g);
            }
        }
    }
    c.measured = worst;
    c.passed = worst <= c.tolerance;
    c.detail = fmt::format("max |mc-oracle|/stderr from {} ({} samples)", where, o.n_samples);
    return c;
}

CheckResult check_figure2(const ValidationOptions& o, OracleCache& oracle)
{
    CheckResult c{7, "figure2-ordering", false, 0.0, -1e-9, 0.0, 0.0, ""};
    double min_margin = INFINITY;
    for (double g : kFigure2Grid) {
        const auto& r = oracle.at(g).rate;
        const double bench = std::max(r.at(ProtocolKind::BenchCsi), r.at(ProtocolKind::BenchQos));
        min_margin = std::min({min_margin, r.at(ProtocolKind::CrRsma) - r.at(ProtocolKind::CrSic),
                               r.at(ProtocolKind::CrSic) - bench});
    }
    const auto& r20 = oracle.at(20.0).rate;
    const double strict_gap = r20.at(ProtocolKind::CrRsma) - r20.at(ProtocolKind::CrSic);

    // E[c] along the grid by Monte Carlo; each step may rise by at most 3 combined stderr.
    double worst_rise = -INFINITY;
    std::optional<EstimateResult> prev;
    for (double g : kFigure2Grid) {
        const auto cur = mean_power_factor(default_scenario(g, g), mc_config(o, o.n_samples));
        if (prev) {
            const double se = std::hypot(prev->std_error, cur.std_error);
            worst_rise = std::max(worst_rise, (cur.value - prev->value) / se);
        }
        prev = cur;
    }
    c.measured = min_margin;
    c.passed = min_margin >= c.tolerance && strict_gap > 0.0 && worst_rise <= 3.0;
    c.detail = fmt::format("C_R-C_S at 20dB {:.6g} (must be >0); max E[c] rise {:.3g} stderr (tolerance 3)",
                           strict_gap, worst_rise);
    return c;
}

CheckResult check_figure3(const ValidationOptions& o)
{
    CheckResult c{8, "figure3-asymptote", false, 0.0, 0.01, 0.0, 0.0, ""};
    const auto high = oracle_params(default_scenario(60.0, 20.0), o.oracle_rel_tol);
    const double ceiling = interference_free_ceiling_oracle(high).value;
    double worst = 0.0;
    for (ProtocolKind k : {ProtocolKind::CrRsma, ProtocolKind::CrSic, ProtocolKind::BenchQos}) {
        worst = std::max(worst, rel_diff(ergodic_rate_oracle(k, high).value, ceiling));
    }
    const auto low = oracle_params(default_scenario(10.0, 20.0), o.oracle_rel_tol);
    const double qos = ergodic_rate_oracle(ProtocolKind::BenchQos, low).value;
    const double gain = std::min(ergodic_rate_oracle(ProtocolKind::CrRsma, low).value,
                                 ergodic_rate_oracle(ProtocolKind::CrSic, low).value) /
                        qos;
    c.measured = worst;
    c.passed = worst <= c.tolerance && gain >= 1.1;
    c.detail = fmt::format("min CR/QoS ratio at 10dB {:.4g} (must be >=1.1)", gain);
    return c;
}

CheckResult check_determinism(const ValidationOptions& o)
{
    CheckResult c{9, "thread-determinism", false, 0.0, 0.0, 0.0, 0.0, ""};
    auto spec = figure2_preset();
    spec.methods = {Method::Mc};
    EvalSettings settings;
    settings.mc = mc_config(o, std::max<std::uint64_t>(o.n_samples / 10, 1));
    std::vector<std::string> outputs;
    for (unsigned t : {1u, 4u, 16u}) {
        settings.mc.threads = t;
        outputs.push_back(to_csv(run_sweep(spec, settings)));
    }
    const double mismatches = (outputs[1] != outputs[0]) + (outputs[2] != outputs[0]);
    c.measured = mismatches;
    c.passed = mismatches == 0.0;
    c.detail = fmt::format("figure2 mc sweep, {} samples/point, threads 1/4/16 (effective {}/{}/{})",
                           settings.mc.n_samples, effective_threads(1), effective_threads(4), effective_threads(16));
    return c;
}

} // namespace

double e1_reference(double x)
{
    if (!(x > 0.0)) throw DomainError("e1_reference: x must be positive");
    AdaptiveOptions opt;
    opt.rel_tol = 1e-13;
    opt.max_subdivisions = 20000;
    opt.geometric_panels = 40;
    return integrate_adaptive([x](double s) { return std::exp(-x / s) / s; }, 0.0, 1.0, opt).value;
}

ValidationOptions quick_options(ValidationOptions base)
{
    base.n_samples = 100'000;
    return base;
}

bool ValidationReport::all_passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

ValidationReport run_validation(const ValidationOptions& options)
{
    ValidationReport report;
    OracleCache oracle(options.oracle_rel_tol);
    static const char* const kNames[] = {"quadrature",       "special-functions",  "pu-protection",
                                         "rsma-dominates-sic", "analytic-vs-oracle", "mc-vs-oracle",
                                         "figure2-ordering", "figure3-asymptote",  "thread-determinism"};
    const std::vector<std::function<CheckResult()>> checks{
        [] { return check_quadrature(); },
        [] { return check_special_functions(); },
        [&] { return check_pu_protection(options); },
        [&] { return check_proposition(options); },
        [&] { return check_analytic(options, report.arbitration); },
        [&] { return check_monte_carlo(options, oracle); },
        [&] { return check_figure2(options, oracle); },
        [&] { return check_figure3(options); },
        [&] { return check_determinism(options); },
    };
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), id) == options.only.end()) {
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        CheckResult c;
        try {
            c = checks[i]();
        } catch (const std::exception& e) {
            c.id = id;
            c.name = kNames[i];
            c.passed = false;
            c.measured = NAN;
            c.detail = std::string("exception: ") + e.what();
        }
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_seconds > 0.0 && c.seconds > c.budget_seconds) {
            c.passed = false;
            c.detail += fmt::format("; over runtime budget {}s", c.budget_seconds);
        }
        report.checks.push_back(std::move(c));
    }
    return report;
}

std::string format_check(const CheckResult& c)
{
    return fmt::format("id={} name={} status={} measured={:.6g} tolerance={:.6g} runtime_s={:.3f} {}", c.id, c.name,
                       c.passed ? "PASS" : "FAIL", c.measured, c.tolerance, c.seconds, c.detail);
}

std::string deviation_report_json(const ValidationReport& report)
{
    using nlohmann::json;
    json points = json::array();
    for (const auto& g : report.arbitration) {
        const auto& r = g.report;
        json terms = json::array();
        for (const auto& t : r.terms) {
            terms.push_back({{"term", t.term},
                             {"printed", t.printed},
                             {"derived", t.derived},
                             {"oracle", t.oracle},
                             {"rel_dev_printed", t.rel_dev_printed},
                             {"rel_dev_derived", t.rel_dev_derived},
                             {"printed_exceeds_1pct", t.rel_dev_printed > 0.01},
                             {"chosen", t.chosen}});
        }
        points.push_back({{"gamma0_db", g.gamma0_db},
                          {"lambda_p", r.lambda_p},
                          {"lambda_s", r.lambda_s},
                          {"theta_p", r.theta_p},
                          {"terms", terms},
                          {"rsma", {{"arbitrated", r.rsma_arbitrated}, {"oracle", r.rsma_oracle}}},
                          {"sic", {{"arbitrated", r.sic_arbitrated}, {"oracle", r.sic_oracle}}}});
    }
    json checks = json::array();
    for (const auto& c : report.checks) {
        checks.push_back({{"id", c.id},
                          {"name", c.name},
                          {"status", c.passed ? "PASS" : "FAIL"},
                          {"measured", c.measured},
                          {"tolerance", c.tolerance},
                          {"runtime_s", c.seconds},
                          {"detail", c.detail}});
    }
    return json{{"grid", points}, {"checks", checks}}.dump(2) + "\n";
}

} // namespace crul
