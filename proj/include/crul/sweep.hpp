#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crul/montecarlo.hpp"

namespace crul {

// One CSV record.
struct ReportRow {
    ProtocolKind protocol = ProtocolKind::CrRsma;
    double gamma0p_db = 0.0;
    double gamma0s_db = 0.0;
    Method method = Method::Mc;
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0; // 0 for analytic and oracle rows
    std::optional<double> mean_c;
};

struct EvalSettings {
    McConfig mc;
    int nodes = 100;
    double oracle_rel_tol = 1e-9;
};

// Evaluates every available (protocol, method) pair at one configuration. The
// benchmarks have no closed form, so they yield no analytic rows.
std::vector<ReportRow> evaluate_point(const ScenarioConfig& scenario, const std::vector<ProtocolKind>& protocols,
                                      const std::vector<Method>& methods, const EvalSettings& settings);

enum class SweepVariable { Gamma0Both, Gamma0Pu };

struct SweepSpec {
    SweepVariable variable = SweepVariable::Gamma0Both;
    double start_db = 0.0;
    double stop_db = 40.0;
    double step_db = 2.0;
    double fixed_gamma0_su_db = 20.0;
    std::vector<ProtocolKind> protocols;
    std::vector<Method> methods;
    ScenarioConfig base;
};

// Throws DomainError on an empty protocol/method set or a malformed grid.
void validate(const SweepSpec& spec);
std::vector<double> sweep_grid(const SweepSpec& spec);

// Scenario at one grid point.
ScenarioConfig scenario_at(const SweepSpec& spec, double gamma0_db);

std::vector<ReportRow> run_sweep(const SweepSpec& spec, const EvalSettings& settings);

// Default two-user geometry: d_P/d_0 = 1, d_S/d_0 = 2, u = 2, R_th/B = 2.5.
ScenarioConfig default_scenario(double gamma0p_db = 20.0, double gamma0s_db = 20.0);

SweepSpec figure2_preset();
SweepSpec figure3_preset();

inline constexpr std::string_view kCsvHeader =
    "protocol,gamma0P_db,gamma0S_db,method,value_bpshz,stderr,n_samples,mean_c";

std::string format_number(double v); // 9 significant digits
std::string format_row(const ReportRow& row);
std::string to_csv(const std::vector<ReportRow>& rows);
std::optional<ReportRow> parse_row(std::string_view line);

// gnuplot script plotting every (protocol, method) series found in `rows` from `csv_path`.
std::string plot_script(const std::string& csv_path, const SweepSpec& spec, const std::vector<ReportRow>& rows);

} // namespace crul
