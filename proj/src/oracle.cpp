#include "crul/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include "crul/errors.hpp"

namespace crul {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 15-point Kronrod abscissae and weights with the embedded 7-point Gauss rule (QUADPACK qk15).
constexpr std::array<double, 8> kXgk{0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                     0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                     0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                     0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk{0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                     0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                     0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                     0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo, hi, value, error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel kronrod15(const std::function<double(double)>& f, double lo, double hi)
{
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double result_k = fc * kWgk[7];
    double result_g = fc * kWg[3];
    double result_abs = std::abs(result_k);
    std::array<double, 7> f1{}, f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        f1[j] = f(center - dx);
        f2[j] = f(center + dx);
        result_k += kWgk[j] * (f1[j] + f2[j]);
        result_abs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) result_g += kWg[j / 2] * (f1[j] + f2[j]);
    }
    const double mean = 0.5 * result_k;
    double result_asc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) result_asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

    result_k *= half;
    result_abs *= std::abs(half);
    result_asc *= std::abs(half);
    double err = std::abs((result_k - result_g * half));
    if (result_asc != 0.0 && err != 0.0) err = result_asc * std::min(1.0, std::pow(200.0 * err / result_asc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (result_abs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * result_abs, err);
    if (!std::isfinite(result_k)) throw NumericError("integrate_adaptive: non-finite integrand", center);
    return {lo, hi, result_k, err};
}

} // namespace

IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                     const AdaptiveOptions& options)
{
    if (!(hi > lo)) return {};
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("integrate_adaptive: infinite limit");

    std::priority_queue<Panel> panels;
    std::vector<double> breaks;
    const double width = hi - lo;
    breaks.push_back(lo);
    for (int k = options.geometric_panels; k >= 1; --k) breaks.push_back(lo + width * std::ldexp(1.0, -k));
    breaks.push_back(hi);

    double total = 0.0;
    double total_err = 0.0;
    long evals = 0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const auto p = kronrod15(f, breaks[i], breaks[i + 1]);
        evals += 15;
        total += p.value;
        total_err += p.error;
        panels.push(p);
    }

    int splits = 0;
    auto tolerance = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(total)); };
    while (total_err > tolerance()) {
        if (splits >= options.max_subdivisions) {
            throw NumericError("integrate_adaptive: subdivision budget exhausted", 0.5 * (lo + hi), total_err);
        }
        const Panel worst = panels.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            // Cannot refine further in double precision; accept the residual.
            break;
        }
        panels.pop();
        const auto left = kronrod15(f, worst.lo, mid);
        const auto right = kronrod15(f, mid, worst.hi);
        evals += 30;
        ++splits;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }

    // Re-sum to shed accumulated update roundoff.
    total = 0.0;
    total_err = 0.0;
    while (!panels.empty()) {
        total += panels.top().value;
        total_err += panels.top().error;
        panels.pop();
    }
    return {total, total_err, evals};
}

double omega(double theta, double gamma_s)
{
    return 0.5 * (theta - 1.0 + std::sqrt((theta - 1.0) * (theta - 1.0) + 4.0 * theta * (1.0 + gamma_s)));
}

double pu_first_su_limit(double theta, double gamma_p) { return (1.0 + gamma_p) * (gamma_p / theta - 1.0); }

namespace regions {

namespace {

auto constant(double v)
{
    return [v](double) { return v; };
}

} // namespace

RegionSpec all(Integrand f)
{
    return {"all", Nesting::OuterPu, 0.0, kInf, constant(0.0), constant(kInf),
            [](double, double) { return true; }, std::move(f)};
}

RegionSpec pu_outage(double theta, Integrand f)
{
    return {"pu_outage", Nesting::OuterPu, 0.0, theta, constant(0.0), constant(kInf),
            [theta](double, double y) { return y < theta; }, std::move(f)};
}

RegionSpec rsma_split(double theta, Integrand f)
{
    return {"rsma_split", Nesting::OuterPu, theta, kInf, [theta](double y) { return y / theta - 1.0; },
            constant(kInf), [theta](double x, double y) { return theta <= y && y < theta * (1.0 + x); },
            std::move(f)};
}

RegionSpec su_interference_free(double theta, Integrand f)
{
    return {"su_interference_free", Nesting::OuterPu, theta, kInf, constant(0.0),
            [theta](double y) { return y / theta - 1.0; },
            [theta](double x, double y) { return y >= theta * (1.0 + x); }, std::move(f)};
}

RegionSpec sic_pu_first(double theta, Integrand f)
{
    return {"sic_pu_first", Nesting::OuterPu, theta, kInf, [theta](double y) { return y / theta - 1.0; },
            [theta](double y) { return pu_first_su_limit(theta, y); },
            [theta](double x, double y) {
                return theta <= y && y < theta * (1.0 + x) && x / (1.0 + y) <= y / theta - 1.0;
            },
            std::move(f)};
}

RegionSpec sic_su_first(double theta, Integrand f)
{
    return {"sic_su_first", Nesting::OuterPu, theta, kInf, [theta](double y) { return pu_first_su_limit(theta, y); },
            constant(kInf), [theta](double x, double y) { return y > theta && x / (1.0 + y) > y / theta - 1.0; },
            std::move(f)};
}

RegionSpec omega_upper(double theta, Integrand f)
{
    return {"omega_upper", Nesting::OuterSu, 0.0, kInf, [theta](double x) { return omega(theta, x); },
            [theta](double x) { return theta * (1.0 + x); },
            [theta](double x, double y) { return omega(theta, x) < y && y < theta * (1.0 + x); }, std::move(f)};
}

RegionSpec omega_lower(double theta, Integrand f)
{
    return {"omega_lower", Nesting::OuterSu, 0.0, kInf, constant(theta), [theta](double x) { return omega(theta, x); },
            [theta](double x, double y) { return theta <= y && y <= omega(theta, x); }, std::move(f)};
}

} // namespace regions

IntegrationResult restricted_expectation(const RegionSpec& region, double lambda_p, double lambda_s, double rel_tol)
{
    if (!(rel_tol >= 1e-10)) throw DomainError("restricted_expectation: rel_tol below 1e-10");
    if (!(lambda_p > 0.0) || !(lambda_s > 0.0)) throw DomainError("restricted_expectation: rates must be positive");

    // Exponential tails beyond `span` rate-lengths carry relative mass e^{-span}, which is
    // below rel_tol/10 with a further e^{-15} margin for logarithmic integrand growth.
    const double span = std::log(10.0 / rel_tol) + 15.0;
    const bool outer_pu = region.nesting == Nesting::OuterPu;
    const double outer_rate = outer_pu ? lambda_p : lambda_s;
    const double inner_rate = outer_pu ? lambda_s : lambda_p;

    const AdaptiveOptions inner_opts{rel_tol * 0.1, 1e-17, 4000, 24};
    const AdaptiveOptions outer_opts{rel_tol, 1e-300, 4000, 24};

    long evaluations = 0;
    auto inner = [&](double outer) {
        const double lo = std::max(0.0, region.inner_lo(outer));
        const double hi = std::min(region.inner_hi(outer), lo + span / inner_rate);
        if (!(hi > lo)) return 0.0;
        // Integrate in the offset from the lower limit: the limit can be far larger than
        // the span, and the weight relative to it keeps the inner value O(integrand).
        auto g = [&](double t) {
            const double v = lo + t;
            const double x = outer_pu ? v : outer;
            const double y = outer_pu ? outer : v;
            return region.integrand(x, y) * inner_rate * std::exp(-inner_rate * t);
        };
        const auto r = integrate_adaptive(g, 0.0, hi - lo, inner_opts);
        evaluations += r.evaluations;
        return std::exp(-inner_rate * lo) * r.value;
    };

    const double lo = region.outer_lo;
    const double hi = std::min(region.outer_hi, lo + span / outer_rate);
    auto outer_fn = [&](double o) { return outer_rate * std::exp(-outer_rate * o) * inner(o); };
    auto result = integrate_adaptive(outer_fn, lo, hi, outer_opts);
    result.evaluations += evaluations;
    result.error += inner_opts.rel_tol * std::abs(result.value);
    return result;
}

OracleParams oracle_params(const ScenarioConfig& config, double rel_tol)
{
    const auto rates = derive_rates(config);
    return {rates.lambda_p, rates.lambda_s, rates.theta_p, rates.bandwidth, rel_tol};
}

namespace {

IntegrationResult sum(std::initializer_list<IntegrationResult> parts)
{
    IntegrationResult total;
    for (const auto& p : parts) {
        total.value += p.value;
        total.error += p.error;
        total.evaluations += p.evaluations;
    }
    return total;
}

Integrand su_over_pu(double bandwidth)
{
    return [bandwidth](double x, double y) { return bandwidth * std::log2(1.0 + x / (1.0 + y)); };
}

Integrand su_clean(double bandwidth)
{
    return [bandwidth](double x, double) { return bandwidth * std::log2(1.0 + x); };
}

} // namespace

RsmaTerms rsma_terms_oracle(const OracleParams& p)
{
    const double theta = p.theta_p;
    const double b = p.bandwidth;
    auto split = [b, theta](double x, double y) { return b * std::log2((1.0 + x + y) / (1.0 + theta)); };
    return {restricted_expectation(regions::pu_outage(theta, su_over_pu(b)), p.lambda_p, p.lambda_s, p.rel_tol),
            restricted_expectation(regions::rsma_split(theta, split), p.lambda_p, p.lambda_s, p.rel_tol),
            restricted_expectation(regions::su_interference_free(theta, su_clean(b)), p.lambda_p, p.lambda_s,
                                   p.rel_tol)};
}

SicTerms sic_terms_oracle(const OracleParams& p)
{
    const double theta = p.theta_p;
    const double b = p.bandwidth;
    auto reduced = [b, theta](double, double y) { return b * std::log2(y / theta); };
    return {restricted_expectation(regions::pu_outage(theta, su_over_pu(b)), p.lambda_p, p.lambda_s, p.rel_tol),
            restricted_expectation(regions::sic_pu_first(theta, reduced), p.lambda_p, p.lambda_s, p.rel_tol),
            restricted_expectation(regions::sic_su_first(theta, su_over_pu(b)), p.lambda_p, p.lambda_s, p.rel_tol),
            restricted_expectation(regions::su_interference_free(theta, su_clean(b)), p.lambda_p, p.lambda_s,
                                   p.rel_tol)};
}

IntegrationResult mean_power_factor_oracle(const OracleParams& p)
{
    const double theta = p.theta_p;
    // E[c] = 1 - E[(1 - c) 1_split]; c < 1 only on the split event.
    auto saving = [theta](double x, double y) { return 1.0 - (y / theta - 1.0) / x; };
    auto r = restricted_expectation(regions::rsma_split(theta, saving), p.lambda_p, p.lambda_s, p.rel_tol);
    r.value = 1.0 - r.value;
    return r;
}

IntegrationResult ergodic_rate_oracle(ProtocolKind protocol, const OracleParams& p)
{
    switch (protocol) {
    case ProtocolKind::CrRsma: {
        const auto t = rsma_terms_oracle(p);
        return sum({t.pu_outage, t.split, t.interference_free});
    }
    case ProtocolKind::CrSic: {
        const auto t = sic_terms_oracle(p);
        return sum({t.pu_outage, t.pu_first, t.su_first, t.interference_free});
    }
    case ProtocolKind::CrSicNormalized: {
        const double mean_c = mean_power_factor_oracle(p).value;
        OracleParams scaled = p;
        scaled.lambda_s = p.lambda_s * mean_c;
        return ergodic_rate_oracle(ProtocolKind::CrSic, scaled);
    }
    case ProtocolKind::BenchCsi:
        return restricted_expectation(regions::all(su_over_pu(p.bandwidth)), p.lambda_p, p.lambda_s, p.rel_tol);
    case ProtocolKind::BenchQos:
        return restricted_expectation(regions::su_interference_free(p.theta_p, su_clean(p.bandwidth)), p.lambda_p,
                                      p.lambda_s, p.rel_tol);
    }
    throw DomainError("ergodic_rate_oracle: unknown protocol");
}

IntegrationResult interference_free_ceiling_oracle(const OracleParams& p)
{
    return restricted_expectation(regions::all(su_clean(p.bandwidth)), p.lambda_p, p.lambda_s, p.rel_tol);
}

} // namespace crul
