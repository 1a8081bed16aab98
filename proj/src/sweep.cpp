#include "crul/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "crul/analytic.hpp"
#include "crul/errors.hpp"
#include "crul/oracle.hpp"

namespace crul {

ScenarioConfig default_scenario(double gamma0p_db, double gamma0s_db)
{
    ScenarioConfig s;
    s.pu = {gamma0p_db, 1.0, 2.0};
    s.su = {gamma0s_db, 2.0, 2.0};
    s.target_rate_ratio = 2.5;
    s.bandwidth = 1.0;
    return s;
}

std::vector<ReportRow> evaluate_point(const ScenarioConfig& scenario, const std::vector<ProtocolKind>& protocols,
                                      const std::vector<Method>& methods, const EvalSettings& settings)
{
    std::vector<ReportRow> rows;
    const double g_p = scenario.pu.gamma0_db;
    const double g_s = scenario.su.gamma0_db;
    const bool wants_sic = std::any_of(protocols.begin(), protocols.end(), [](ProtocolKind k) {
        return k == ProtocolKind::CrSic || k == ProtocolKind::CrSicNormalized;
    });
    const auto op = oracle_params(scenario, settings.oracle_rel_tol);

    std::optional<double> oracle_c;
    auto oracle_mean_c = [&] {
        if (!oracle_c) oracle_c = mean_power_factor_oracle(op).value;
        return *oracle_c;
    };

    for (Method method : methods) {
        switch (method) {
        case Method::Mc: {
            const auto est = estimate_many(protocols, scenario, settings.mc);
            std::optional<double> mc_c;
            if (wants_sic) mc_c = mean_power_factor(scenario, settings.mc).value;
            for (const auto& e : est) {
                ReportRow row{e.protocol, g_p, g_s, Method::Mc, e.value, e.std_error, e.n_samples, std::nullopt};
                if (e.protocol == ProtocolKind::CrSic || e.protocol == ProtocolKind::CrSicNormalized) row.mean_c = mc_c;
                rows.push_back(row);
            }
            break;
        }
        case Method::Oracle:
            for (ProtocolKind k : protocols) {
                ReportRow row{k, g_p, g_s, Method::Oracle, ergodic_rate_oracle(k, op).value, 0.0, 0, std::nullopt};
                if (k == ProtocolKind::CrSic || k == ProtocolKind::CrSicNormalized) row.mean_c = oracle_mean_c();
                rows.push_back(row);
            }
            break;
        case Method::Analytic: {
            const auto ap = analytic_params(scenario, settings.nodes, settings.nodes);
            for (ProtocolKind k : protocols) {
                ReportRow row{k, g_p, g_s, Method::Analytic, 0.0, 0.0, 0, std::nullopt};
                if (k == ProtocolKind::CrRsma) {
                    row.value = ergodic_rsma_analytic(ap);
                } else if (k == ProtocolKind::CrSic) {
                    row.value = ergodic_sic_analytic(ap);
                    row.mean_c = oracle_mean_c();
                } else if (k == ProtocolKind::CrSicNormalized) {
                    auto scaled = ap;
                    scaled.lambda_s = ap.lambda_s * oracle_mean_c();
                    row.value = ergodic_sic_analytic(scaled);
                    row.mean_c = oracle_mean_c();
                } else {
                    continue;
                }
                rows.push_back(row);
            }
            break;
        }
        }
    }
    return rows;
}

void validate(const SweepSpec& spec)
{
    if (spec.protocols.empty()) throw DomainError("sweep needs at least one protocol");
    if (spec.methods.empty()) throw DomainError("sweep needs at least one method");
    if (!(spec.step_db > 0.0)) throw DomainError("sweep step must be positive");
    if (!(spec.stop_db >= spec.start_db)) throw DomainError("sweep stop must not precede start");
}

std::vector<double> sweep_grid(const SweepSpec& spec)
{
    validate(spec);
    const auto count = static_cast<long>(std::floor((spec.stop_db - spec.start_db) / spec.step_db + 1e-9));
    std::vector<double> grid;
    for (long k = 0; k <= count; ++k) grid.push_back(spec.start_db + static_cast<double>(k) * spec.step_db);
    return grid;
}

ScenarioConfig scenario_at(const SweepSpec& spec, double gamma0_db)
{
    ScenarioConfig s = spec.base;
    s.pu.gamma0_db = gamma0_db;
    s.su.gamma0_db = spec.variable == SweepVariable::Gamma0Both ? gamma0_db : spec.fixed_gamma0_su_db;
    return s;
}

std::vector<ReportRow> run_sweep(const SweepSpec& spec, const EvalSettings& settings)
{
    std::vector<ReportRow> rows;
    for (double g : sweep_grid(spec)) {
        auto point = evaluate_point(scenario_at(spec, g), spec.protocols, spec.methods, settings);
        rows.insert(rows.end(), point.begin(), point.end());
    }
    return rows;
}

SweepSpec figure2_preset()
{
    SweepSpec s;
    s.variable = SweepVariable::Gamma0Both;
    s.start_db = 0.0;
    s.stop_db = 40.0;
    s.step_db = 2.0;
    s.protocols.assign(kAllProtocols.begin(), kAllProtocols.end());
    s.methods = {Method::Mc, Method::Analytic, Method::Oracle};
    s.base = default_scenario();
    return s;
}

SweepSpec figure3_preset()
{
    SweepSpec s = figure2_preset();
    s.variable = SweepVariable::Gamma0Pu;
    s.stop_db = 60.0;
    s.fixed_gamma0_su_db = 20.0;
    return s;
}

std::string format_number(double v) { return fmt::format("{:.9g}", v); }

std::string format_row(const ReportRow& row)
{
    return fmt::format("{},{},{},{},{},{},{},{}", to_string(row.protocol), format_number(row.gamma0p_db),
                       format_number(row.gamma0s_db), to_string(row.method), format_number(row.value),
                       format_number(row.std_error), row.n_samples, row.mean_c ? format_number(*row.mean_c) : "");
}

std::string to_csv(const std::vector<ReportRow>& rows)
{
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += format_row(r);
        out += '\n';
    }
    return out;
}

namespace {

std::optional<double> parse_double(std::string_view s)
{
    // std::from_chars for double is available in libstdc++ 11.
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

} // namespace

std::optional<ReportRow> parse_row(std::string_view line)
{
    std::vector<std::string_view> f;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        f.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (f.size() != 8) return std::nullopt;
    const auto protocol = parse_protocol(f[0]);
    const auto method = parse_method(f[3]);
    const auto gp = parse_double(f[1]);
    const auto gs = parse_double(f[2]);
    const auto value = parse_double(f[4]);
    const auto se = parse_double(f[5]);
    if (!protocol || !method || !gp || !gs || !value || !se) return std::nullopt;
    std::uint64_t n = 0;
    const auto nres = std::from_chars(f[6].data(), f[6].data() + f[6].size(), n);
    if (nres.ec != std::errc() || nres.ptr != f[6].data() + f[6].size()) return std::nullopt;
    ReportRow row{*protocol, *gp, *gs, *method, *value, *se, n, std::nullopt};
    if (!f[7].empty()) {
        const auto c = parse_double(f[7]);
        if (!c) return std::nullopt;
        row.mean_c = *c;
    }
    return row;
}

std::string plot_script(const std::string& csv_path, const SweepSpec& spec, const std::vector<ReportRow>& rows)
{
    std::set<std::pair<std::string, std::string>> series;
    for (const auto& r : rows) series.emplace(std::string(to_string(r.protocol)), std::string(to_string(r.method)));

    const bool pu_only = spec.variable == SweepVariable::Gamma0Pu;
    std::ostringstream os;
    os << "# gnuplot script; run with: gnuplot -p " << csv_path << ".gp\n";
    os << "set datafile separator ','\n";
    os << "set xlabel '" << (pu_only ? "gamma_0P [dB]" : "gamma_0 [dB]") << "'\n";
    os << "set ylabel 'SU ergodic rate [bit/s/Hz]'\n";
    os << "set key top left\nset grid\n";
    os << "plot \\\n";
    const int xcol = 2;
    bool first = true;
    for (const auto& [proto, method] : series) {
        if (!first) os << ", \\\n";
        first = false;
        const char* style = method == "mc" ? "points" : "lines";
        os << "  '< awk -F, \"\\$1==\\\"" << proto << "\\\" && \\$4==\\\"" << method << "\\\"\" " << csv_path
           << "' using " << xcol << ":5 with " << style << " title '" << proto << " (" << method << ")'";
    }
    os << "\n";
    return os.str();
}

} // namespace crul
