#include "crul/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "crul/errors.hpp"

namespace crul {

std::string_view to_string(Method method)
{
    switch (method) {
    case Method::Mc: return "mc";
    case Method::Analytic: return "analytic";
    case Method::Oracle: return "oracle";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view name)
{
    for (auto m : {Method::Mc, Method::Analytic, Method::Oracle}) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

void Moments::merge(const Moments& other)
{
    if (other.count == 0) return;
    if (count == 0) {
        *this = other;
        return;
    }
    const double n_a = static_cast<double>(count);
    const double n_b = static_cast<double>(other.count);
    const double n = n_a + n_b;
    const double delta = other.mean - mean;
    mean += delta * n_b / n;
    m2 += other.m2 + delta * delta * n_a * n_b / n;
    count += other.count;
}

double Moments::std_error() const
{
    return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
}

unsigned effective_threads(unsigned requested)
{
    unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CRUL_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return std::max(1u, n);
}

std::vector<Moments> run_monte_carlo(const ScenarioRates& rates, const McConfig& mc, std::size_t slots,
                                     const SampleFn& per_sample)
{
    if (mc.n_samples == 0) throw DomainError("n_samples must be at least 1");
    if (mc.chunk_size == 0) throw DomainError("chunk_size must be at least 1");

    const std::uint64_t n_chunks = (mc.n_samples + mc.chunk_size - 1) / mc.chunk_size;
    std::vector<std::vector<Moments>> per_chunk(n_chunks, std::vector<Moments>(slots));

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        std::vector<double> out(slots);
        try {
            for (std::uint64_t chunk = next++; chunk < n_chunks; chunk = next++) {
                CounterStream stream = CounterStream::for_chunk(mc.seed, chunk);
                const std::uint64_t begin = chunk * mc.chunk_size;
                const std::uint64_t end = std::min(mc.n_samples, begin + mc.chunk_size);
                auto& acc = per_chunk[chunk];
                for (std::uint64_t j = begin; j < end; ++j) {
                    const auto r = sample_realization(rates, stream);
                    per_sample(r, out);
                    for (std::size_t s = 0; s < slots; ++s) acc[s].push(out[s]);
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = n_chunks;
        }
    };

    const unsigned n_threads =
        static_cast<unsigned>(std::min<std::uint64_t>(effective_threads(mc.threads), n_chunks));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<Moments> total(slots);
    for (const auto& chunk : per_chunk) {
        for (std::size_t s = 0; s < slots; ++s) total[s].merge(chunk[s]);
    }
    return total;
}

namespace {

EstimateResult from_moments(const Moments& m, ProtocolKind protocol)
{
    return {m.mean, m.std_error(), m.count, Method::Mc, protocol};
}

double normalized_su_rate(const ChannelRealization& r, double theta, double bandwidth)
{
    const double c = sic_power_factor(r, theta);
    if (!(c > 0.0)) return sic_rates(r, theta, bandwidth).rate_su; // gamma_p == theta exactly
    return sic_rates({r.gamma_p, r.gamma_s / c}, theta, bandwidth).rate_su;
}

} // namespace

ScenarioConfig normalized_scenario(const ScenarioConfig& scenario, double mean_c)
{
    if (!(mean_c > 0.0 && mean_c <= 1.0)) throw DomainError("mean power factor must lie in (0, 1]");
    ScenarioConfig out = scenario;
    out.su.gamma0_db = scenario.su.gamma0_db - 10.0 * std::log10(mean_c);
    return out;
}

EstimateResult mean_power_factor(const ScenarioConfig& scenario, const McConfig& mc)
{
    const auto rates = derive_rates(scenario);
    const auto m = run_monte_carlo(rates, mc, 1, [&](const ChannelRealization& r, std::span<double> out) {
        out[0] = sic_power_factor(r, rates.theta_p);
    });
    return from_moments(m[0], ProtocolKind::CrSic);
}

std::vector<EstimateResult> estimate_many(std::span<const ProtocolKind> protocols, const ScenarioConfig& scenario,
                                          const McConfig& mc)
{
    const auto rates = derive_rates(scenario);
    std::vector<EstimateResult> results(protocols.size());

    // Average-power normalization needs its own second pass at the rescaled SU SNR.
    std::vector<ProtocolKind> direct;
    std::vector<std::size_t> direct_index;
    for (std::size_t i = 0; i < protocols.size(); ++i) {
        if (protocols[i] == ProtocolKind::CrSicNormalized && mc.normalization == Normalization::AveragePower) {
            const double mean_c = mean_power_factor(scenario, mc).value;
            const auto scaled = normalized_scenario(scenario, mean_c);
            auto r = estimate(ProtocolKind::CrSic, scaled, mc);
            r.protocol = ProtocolKind::CrSicNormalized;
            results[i] = r;
        } else {
            direct.push_back(protocols[i]);
            direct_index.push_back(i);
        }
    }
    if (direct.empty()) return results;

    const auto m = run_monte_carlo(rates, mc, direct.size(), [&](const ChannelRealization& r, std::span<double> out) {
        for (std::size_t k = 0; k < direct.size(); ++k) {
            out[k] = direct[k] == ProtocolKind::CrSicNormalized
                         ? normalized_su_rate(r, rates.theta_p, rates.bandwidth)
                         : su_rate(direct[k], r, rates.theta_p, rates.bandwidth);
        }
    });
    for (std::size_t k = 0; k < direct.size(); ++k) results[direct_index[k]] = from_moments(m[k], direct[k]);
    return results;
}

EstimateResult estimate(ProtocolKind protocol, const ScenarioConfig& scenario, const McConfig& mc)
{
    const ProtocolKind one[] = {protocol};
    return estimate_many(one, scenario, mc).front();
}

std::map<std::string, double> event_probabilities(const ScenarioConfig& scenario, const McConfig& mc)
{
    const auto rates = derive_rates(scenario);
    const auto m = run_monte_carlo(rates, mc, 7, [&](const ChannelRealization& r, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        out[static_cast<std::size_t>(rsma_case(r, rates.theta_p))] = 1.0;
        out[3 + static_cast<std::size_t>(sic_case(r, rates.theta_p))] = 1.0;
    });
    static const char* const kLabels[] = {"rsma.pu_outage", "rsma.split",   "rsma.interference_free",
                                          "sic.pu_outage",  "sic.pu_first", "sic.su_first",
                                          "sic.interference_free"};
    std::map<std::string, double> out;
    for (std::size_t k = 0; k < 7; ++k) out[kLabels[k]] = m[k].mean;
    return out;
}

CaseMeans case_means(ProtocolKind protocol, const ScenarioConfig& scenario, const McConfig& mc)
{
    if (protocol != ProtocolKind::CrRsma && protocol != ProtocolKind::CrSic) {
        throw DomainError("case_means: only CR-RSMA and CR-SIC have case decompositions");
    }
    const auto rates = derive_rates(scenario);
    const std::size_t n_cases = protocol == ProtocolKind::CrRsma ? 3 : 4;
    const auto m = run_monte_carlo(rates, mc, n_cases + 1, [&](const ChannelRealization& r, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        const double rate = su_rate(protocol, r, rates.theta_p, rates.bandwidth);
        const std::size_t k = protocol == ProtocolKind::CrRsma
                                  ? static_cast<std::size_t>(rsma_case(r, rates.theta_p))
                                  : static_cast<std::size_t>(sic_case(r, rates.theta_p));
        out[k] = rate;
        out[n_cases] = rate;
    });
    CaseMeans cm;
    for (std::size_t k = 0; k < n_cases; ++k) cm.cases.push_back(m[k].mean);
    cm.total = m[n_cases].mean;
    return cm;
}

} // namespace crul
