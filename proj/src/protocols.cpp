#include "crul/protocols.hpp"

#include <cassert>
#include <cmath>

#include "crul/errors.hpp"

namespace crul {

namespace {

double log2_rate(double bandwidth, double sinr) { return bandwidth * std::log2(1.0 + sinr); }

void require_threshold(double theta_p)
{
    if (!(theta_p > 0.0)) throw DomainError("theta_p must be positive");
}

} // namespace

std::string_view to_string(ProtocolKind kind)
{
    switch (kind) {
    case ProtocolKind::CrRsma: return "cr-rsma";
    case ProtocolKind::CrSic: return "cr-sic";
    case ProtocolKind::CrSicNormalized: return "cr-sic-norm";
    case ProtocolKind::BenchCsi: return "csi";
    case ProtocolKind::BenchQos: return "qos";
    }
    return "?";
}

std::optional<ProtocolKind> parse_protocol(std::string_view name)
{
    for (auto kind : kAllProtocols) {
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- CR-RSMA

double rsma_alpha(const ChannelRealization& r, double theta_p)
{
    require_threshold(theta_p);
    if (r.gamma_p / (r.gamma_s + 1.0) >= theta_p) return 0.0;
    if (r.gamma_p < theta_p) return 1.0;
    assert(r.gamma_s > 0.0);
    return 1.0 - (r.gamma_p / theta_p - 1.0) / r.gamma_s;
}

RatePair rsma_rates(const ChannelRealization& r, double alpha, double bandwidth)
{
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0,1]");
    const double residual = (1.0 - alpha) * r.gamma_s;
    const double rate_pu = log2_rate(bandwidth, r.gamma_p / (residual + 1.0));
    const double rate_su = log2_rate(bandwidth, alpha * r.gamma_s / (r.gamma_p + residual + 1.0)) +
                           log2_rate(bandwidth, residual);
    return {rate_pu, rate_su};
}

RsmaCase rsma_case(const ChannelRealization& r, double theta_p)
{
    // Same precedence as rsma_alpha.
    if (r.gamma_p / (r.gamma_s + 1.0) >= theta_p) return RsmaCase::InterferenceFree;
    if (r.gamma_p < theta_p) return RsmaCase::PuOutage;
    return RsmaCase::Split;
}

RateOutcome rsma_outcome(const ChannelRealization& r, double theta_p, double bandwidth)
{
    const double alpha = rsma_alpha(r, theta_p);
    const auto rates = rsma_rates(r, alpha, bandwidth);
    RateOutcome out;
    out.protocol = ProtocolKind::CrRsma;
    out.power_factor = alpha;
    out.rate_pu = rates.rate_pu;
    out.rate_su = rates.rate_su;
    out.pu_protected = r.gamma_p < theta_p || rates.rate_pu >= log2_rate(bandwidth, theta_p) * (1.0 - 1e-12);
    return out;
}

// ----------------------------------------------------------------- CR-SIC

double sic_power_factor(const ChannelRealization& r, double theta_p)
{
    require_threshold(theta_p);
    if (theta_p <= r.gamma_p && r.gamma_p < theta_p * (r.gamma_s + 1.0)) {
        assert(r.gamma_s > 0.0);
        return (r.gamma_p / theta_p - 1.0) / r.gamma_s;
    }
    return 1.0;
}

DecodingOrder sic_decoding_order(const ChannelRealization& r, double theta_p)
{
    require_threshold(theta_p);
    if (r.gamma_p <= theta_p) return DecodingOrder::SuFirst;
    if (r.gamma_s / (1.0 + r.gamma_p) > r.gamma_p / theta_p - 1.0) return DecodingOrder::SuFirst;
    return DecodingOrder::PuFirst;
}

SicCase sic_case(const ChannelRealization& r, double theta_p)
{
    require_threshold(theta_p);
    if (r.gamma_p < theta_p) return SicCase::PuOutage;
    if (r.gamma_p >= theta_p * (r.gamma_s + 1.0)) return SicCase::InterferenceFree;
    // theta_p <= gamma_p < theta_p (gamma_s + 1); the order picks between (ii) and (iii).
    // gamma_p == theta_p with gamma_s > 0 is decoded SU-first and lands in (iii).
    return sic_decoding_order(r, theta_p) == DecodingOrder::PuFirst ? SicCase::PuFirstReduced
                                                                     : SicCase::SuFirst;
}

RateOutcome sic_rates(const ChannelRealization& r, double theta_p, double bandwidth)
{
    RateOutcome out;
    out.protocol = ProtocolKind::CrSic;
    switch (sic_case(r, theta_p)) {
    case SicCase::PuOutage:
        // SU decoded first against the PU; the PU then decodes interference-free below target.
        out.order = DecodingOrder::SuFirst;
        out.power_factor = 1.0;
        out.rate_su = log2_rate(bandwidth, r.gamma_s / (1.0 + r.gamma_p));
        out.rate_pu = log2_rate(bandwidth, r.gamma_p);
        break;
    case SicCase::PuFirstReduced: {
        const double c = sic_power_factor(r, theta_p);
        out.order = DecodingOrder::PuFirst;
        out.power_factor = c;
        out.rate_su = log2_rate(bandwidth, c * r.gamma_s);
        out.rate_pu = log2_rate(bandwidth, r.gamma_p / (c * r.gamma_s + 1.0));
        break;
    }
    case SicCase::SuFirst:
        out.order = DecodingOrder::SuFirst;
        out.power_factor = 1.0;
        out.rate_su = log2_rate(bandwidth, r.gamma_s / (1.0 + r.gamma_p));
        out.rate_pu = log2_rate(bandwidth, r.gamma_p);
        break;
    case SicCase::InterferenceFree:
        out.order = DecodingOrder::PuFirst;
        out.power_factor = 1.0;
        out.rate_su = log2_rate(bandwidth, r.gamma_s);
        out.rate_pu = log2_rate(bandwidth, r.gamma_p / (r.gamma_s + 1.0));
        break;
    }
    out.pu_protected = r.gamma_p < theta_p || out.rate_pu >= log2_rate(bandwidth, theta_p) * (1.0 - 1e-12);
    return out;
}

// ------------------------------------------------------------- benchmarks

double benchmark_su_rate(ProtocolKind kind, const ChannelRealization& r, double theta_p, double bandwidth)
{
    switch (kind) {
    case ProtocolKind::BenchCsi: return log2_rate(bandwidth, r.gamma_s / (1.0 + r.gamma_p));
    case ProtocolKind::BenchQos:
        require_threshold(theta_p);
        return r.gamma_p > theta_p * (r.gamma_s + 1.0) ? log2_rate(bandwidth, r.gamma_s) : 0.0;
    default: throw DomainError("benchmark_su_rate requires a benchmark protocol");
    }
}

double su_rate(ProtocolKind kind, const ChannelRealization& r, double theta_p, double bandwidth)
{
    switch (kind) {
    case ProtocolKind::CrRsma: return rsma_outcome(r, theta_p, bandwidth).rate_su;
    case ProtocolKind::CrSic: return sic_rates(r, theta_p, bandwidth).rate_su;
    case ProtocolKind::BenchCsi:
    case ProtocolKind::BenchQos: return benchmark_su_rate(kind, r, theta_p, bandwidth);
    case ProtocolKind::CrSicNormalized:
        throw DomainError("normalized CR-SIC is defined at the ensemble level, not per realization");
    }
    return 0.0;
}

} // namespace crul
