#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <utility>

#include "crul/channel.hpp"

namespace crul {

enum class ProtocolKind { CrRsma, CrSic, CrSicNormalized, BenchCsi, BenchQos };

inline constexpr std::array<ProtocolKind, 5> kAllProtocols{
    ProtocolKind::CrRsma, ProtocolKind::CrSic, ProtocolKind::CrSicNormalized, ProtocolKind::BenchCsi,
    ProtocolKind::BenchQos};

// CLI/CSV spelling: cr-rsma, cr-sic, cr-sic-norm, csi, qos.
std::string_view to_string(ProtocolKind kind);
std::optional<ProtocolKind> parse_protocol(std::string_view name);

enum class DecodingOrder { SuFirst, PuFirst };

// Case labels of the ergodic-rate decompositions.
enum class RsmaCase { PuOutage, Split, InterferenceFree };
enum class SicCase { PuOutage, PuFirstReduced, SuFirst, InterferenceFree };

struct RateOutcome {
    ProtocolKind protocol = ProtocolKind::CrRsma;
    // alpha for CR-RSMA, the SU transmit fraction for CR-SIC, 1 for benchmarks.
    double power_factor = 1.0;
    std::optional<DecodingOrder> order;
    double rate_pu = 0.0;
    double rate_su = 0.0;
    bool pu_protected = true;
};

double rsma_alpha(const ChannelRealization& r, double theta_p);

struct RatePair {
    double rate_pu;
    double rate_su;
};

// Achieved rates for a given split factor; alpha must lie in [0,1].
RatePair rsma_rates(const ChannelRealization& r, double alpha, double bandwidth);
RsmaCase rsma_case(const ChannelRealization& r, double theta_p);
RateOutcome rsma_outcome(const ChannelRealization& r, double theta_p, double bandwidth);

double sic_power_factor(const ChannelRealization& r, double theta_p);
DecodingOrder sic_decoding_order(const ChannelRealization& r, double theta_p);
SicCase sic_case(const ChannelRealization& r, double theta_p);
RateOutcome sic_rates(const ChannelRealization& r, double theta_p, double bandwidth);

// Benchmarks; the QoS scheme contributes 0 outside its admission event.
double benchmark_su_rate(ProtocolKind kind, const ChannelRealization& r, double theta_p, double bandwidth);

// SU rate of any non-normalized protocol for one realization.
double su_rate(ProtocolKind kind, const ChannelRealization& r, double theta_p, double bandwidth);

} // namespace crul
