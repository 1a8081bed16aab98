#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "crul/channel.hpp"
#include "crul/protocols.hpp"

namespace crul {

enum class Method { Mc, Analytic, Oracle };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);

struct EstimateResult {
    double value = 0.0;
    double std_error = 0.0; // sample-std / sqrt(n) for mc, 0 otherwise
    std::uint64_t n_samples = 0;
    Method method = Method::Mc;
    ProtocolKind protocol = ProtocolKind::CrRsma;
};

// How the normalized CR-SIC curve rescales the SU.
//  AveragePower   - SU mean SNR divided by E[c] estimated at the nominal configuration.
//  PerRealization - each draw's SU SNR divided by that draw's own c before CR-SIC runs.
enum class Normalization { AveragePower, PerRealization };

struct McConfig {
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t seed = 0x0c5a2021;
    std::uint64_t chunk_size = 1u << 14;
    unsigned threads = 0; // 0 = hardware concurrency; CRUL_THREADS caps either way
    Normalization normalization = Normalization::AveragePower;
};

// Worker count after applying the CRUL_THREADS cap.
unsigned effective_threads(unsigned requested);

// Running mean/variance with the pairwise merge of Chan et al.
struct Moments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double v)
    {
        ++count;
        const double delta = v - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (v - mean);
    }
    void merge(const Moments& other);
    double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
    double std_error() const;
};

// Evaluates `per_sample` on every realization and returns one Moments per output slot.
// Sample j is drawn from the stream of chunk j / chunk_size; chunk results merge in
// chunk order, so the output is independent of thread count and scheduling.
using SampleFn = std::function<void(const ChannelRealization&, std::span<double>)>;
std::vector<Moments> run_monte_carlo(const ScenarioRates& rates, const McConfig& mc, std::size_t slots,
                                     const SampleFn& per_sample);

EstimateResult estimate(ProtocolKind protocol, const ScenarioConfig& scenario, const McConfig& mc);

// Several protocols over one shared realization stream.
std::vector<EstimateResult> estimate_many(std::span<const ProtocolKind> protocols, const ScenarioConfig& scenario,
                                          const McConfig& mc);

// E[c] of CR-SIC, c the PU-protecting factor of each draw.
EstimateResult mean_power_factor(const ScenarioConfig& scenario, const McConfig& mc);

// Scenario with the SU mean SNR divided by mean_c.
ScenarioConfig normalized_scenario(const ScenarioConfig& scenario, double mean_c);

// Empirical frequency of each case of the RSMA and SIC decompositions.
// Keys: rsma.pu_outage, rsma.split, rsma.interference_free,
//       sic.pu_outage, sic.pu_first, sic.su_first, sic.interference_free.
std::map<std::string, double> event_probabilities(const ScenarioConfig& scenario, const McConfig& mc);

// Per-case restricted means E[R_S 1_case] (RSMA: 3 cases, SIC: 4) and the plain mean, one pass.
struct CaseMeans {
    std::vector<double> cases;
    double total = 0.0;
};
CaseMeans case_means(ProtocolKind protocol, const ScenarioConfig& scenario, const McConfig& mc);

} // namespace crul
