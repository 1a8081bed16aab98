// Command-line front end: point, sweep, figure2, figure3, validate.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "crul/errors.hpp"
#include "crul/sweep.hpp"
#include "crul/validation.hpp"

namespace {

enum Exit { kOk = 0, kRuntime = 1, kUsage = 2, kValidation = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Args {
    std::optional<double> gamma0;
    std::optional<double> gamma0_pu;
    std::optional<double> gamma0_su;
    double dist_pu = 1.0;
    double dist_su = 2.0;
    double u = 2.0;
    double rate_th = 2.5;
    std::optional<std::string> protocol;
    std::optional<std::string> method;
    std::optional<std::uint64_t> samples;
    std::uint64_t seed = crul::McConfig{}.seed;
    int nodes = 100;
    unsigned threads = 0;
    std::string normalization = "average";
    std::optional<std::string> out;
    bool emit_plot = false;
    bool quick = false;
    std::string vary = "gamma0";
    double start = 0.0;
    double stop = 40.0;
    double step = 2.0;
};

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<crul::ProtocolKind> parse_protocols(const std::string& s)
{
    std::vector<crul::ProtocolKind> out;
    for (const auto& name : split_list(s)) {
        if (name == "all") {
            for (auto k : crul::kAllProtocols) {
                if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
            }
            continue;
        }
        const auto k = crul::parse_protocol(name);
        if (!k) throw UsageError("unknown protocol '" + name + "' (cr-rsma, cr-sic, cr-sic-norm, csi, qos, all)");
        if (std::find(out.begin(), out.end(), *k) == out.end()) out.push_back(*k);
    }
    if (out.empty()) throw UsageError("empty protocol set");
    return out;
}

std::vector<crul::Method> parse_methods(const std::string& s)
{
    std::vector<crul::Method> out;
    for (const auto& name : split_list(s)) {
        if (name == "all") {
            out = {crul::Method::Mc, crul::Method::Analytic, crul::Method::Oracle};
            continue;
        }
        const auto m = crul::parse_method(name);
        if (!m) throw UsageError("unknown method '" + name + "' (mc, analytic, oracle, all)");
        if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
    }
    if (out.empty()) throw UsageError("empty method set");
    return out;
}

crul::ScenarioConfig scenario_from(const Args& a, double gamma0p_db, double gamma0s_db)
{
    crul::ScenarioConfig s;
    s.pu = {gamma0p_db, a.dist_pu, a.u};
    s.su = {gamma0s_db, a.dist_su, a.u};
    s.target_rate_ratio = a.rate_th;
    s.bandwidth = 1.0;
    crul::validate(s);
    return s;
}

crul::EvalSettings settings_from(const Args& a)
{
    crul::EvalSettings e;
    e.mc.n_samples = a.samples.value_or(a.quick ? 100'000 : 1'000'000);
    e.mc.seed = a.seed;
    e.mc.threads = a.threads;
    if (a.normalization == "average") {
        e.mc.normalization = crul::Normalization::AveragePower;
    } else if (a.normalization == "per-realization") {
        e.mc.normalization = crul::Normalization::PerRealization;
    } else {
        throw UsageError("--normalization must be 'average' or 'per-realization'");
    }
    e.nodes = a.nodes;
    return e;
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << content;
    f.close();
    if (!f) throw IoError("write to '" + path + "' failed");
}

void emit(const Args& a, const std::string& content)
{
    if (a.out) {
        write_file(*a.out, content);
    } else {
        std::cout << content;
    }
}

int run_point(const Args& a)
{
    const auto gp = a.gamma0_pu ? a.gamma0_pu : a.gamma0;
    const auto gs = a.gamma0_su ? a.gamma0_su : a.gamma0;
    if (!gp || !gs) throw UsageError("point needs --gamma0, or both --gamma0-pu and --gamma0-su");
    const auto scenario = scenario_from(a, *gp, *gs);
    const auto rows = crul::evaluate_point(scenario, parse_protocols(a.protocol.value_or("all")),
                                           parse_methods(a.method.value_or("all")), settings_from(a));
    emit(a, crul::to_csv(rows));
    return kOk;
}

void probe_writable(const std::optional<std::string>& path)
{
    if (!path) return;
    std::ofstream f(*path, std::ios::app);
    if (!f) throw IoError("cannot open '" + *path + "' for writing");
}

int run_sweep_spec(const Args& a, crul::SweepSpec spec)
{
    try {
        crul::validate(spec);
    } catch (const crul::DomainError& e) {
        throw UsageError(e.what());
    }
    if (a.emit_plot && !a.out) throw UsageError("--emit-plot needs --out");
    probe_writable(a.out);
    const auto rows = crul::run_sweep(spec, settings_from(a));
    const std::string csv = crul::to_csv(rows);
    emit(a, csv);
    if (a.emit_plot) {
        write_file(*a.out + ".gp", crul::plot_script(*a.out, spec, rows));
    }
    return kOk;
}

int run_sweep(const Args& a)
{
    crul::SweepSpec spec;
    if (a.vary == "gamma0") {
        spec.variable = crul::SweepVariable::Gamma0Both;
    } else if (a.vary == "gamma0-pu") {
        spec.variable = crul::SweepVariable::Gamma0Pu;
    } else {
        throw UsageError("--vary must be 'gamma0' or 'gamma0-pu'");
    }
    spec.start_db = a.start;
    spec.stop_db = a.stop;
    spec.step_db = a.step;
    spec.fixed_gamma0_su_db = a.gamma0_su.value_or(20.0);
    spec.protocols = parse_protocols(a.protocol.value_or("all"));
    spec.methods = parse_methods(a.method.value_or("all"));
    spec.base = scenario_from(a, 0.0, 0.0);
    return run_sweep_spec(a, spec);
}

int run_figure(const Args& a, crul::SweepSpec spec)
{
    if (a.protocol) spec.protocols = parse_protocols(*a.protocol);
    if (a.method) spec.methods = parse_methods(*a.method);
    spec.base = scenario_from(a, 0.0, 0.0);
    if (a.gamma0_su) spec.fixed_gamma0_su_db = *a.gamma0_su;
    return run_sweep_spec(a, spec);
}

int run_validate(const Args& a)
{
    crul::ValidationOptions o = a.quick ? crul::quick_options() : crul::ValidationOptions{};
    if (a.samples) o.n_samples = *a.samples;
    o.seed = a.seed;
    o.threads = a.threads;
    o.nodes = a.nodes;
    const auto report = crul::run_validation(o);
    for (const auto& c : report.checks) std::cout << crul::format_check(c) << '\n';
    const std::string path = a.out.value_or("deviation_report.json");
    write_file(path, crul::deviation_report_json(report));
    std::cout << "deviation report: " << path << '\n';
    return report.all_passed() ? kOk : kValidation;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Ergodic SU rate of cognitive-radio uplink RSMA and SIC"};
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.require_subcommand(1);
    Args a;

    app.add_option("--gamma0", a.gamma0, "Transmit SNR of both users [dB]");
    app.add_option("--gamma0-pu", a.gamma0_pu, "PU transmit SNR [dB]");
    app.add_option("--gamma0-su", a.gamma0_su, "SU transmit SNR [dB]");
    app.add_option("--dist-pu", a.dist_pu, "PU distance ratio d_P/d_0")->capture_default_str();
    app.add_option("--dist-su", a.dist_su, "SU distance ratio d_S/d_0")->capture_default_str();
    app.add_option("--u", a.u, "Path-loss exponent")->capture_default_str();
    app.add_option("--rate-th", a.rate_th, "PU target rate [bits/s/Hz]")->capture_default_str();
    app.add_option("--protocol", a.protocol, "Comma list of cr-rsma, cr-sic, cr-sic-norm, csi, qos, or all");
    app.add_option("--method", a.method, "Comma list of mc, analytic, oracle, or all");
    app.add_option("--samples", a.samples, "Monte Carlo samples per point");
    app.add_option("--seed", a.seed, "Monte Carlo seed")->capture_default_str();
    app.add_option("--nodes", a.nodes, "Gauss-Laguerre nodes n = m")->capture_default_str();
    app.add_option("--threads", a.threads, "Worker threads (0 = all cores; CRUL_THREADS caps)");
    app.add_option("--normalization", a.normalization, "cr-sic-norm scaling: average or per-realization")
        ->capture_default_str();
    app.add_option("--out", a.out, "Output path (stdout if omitted)");
    app.add_flag("--emit-plot", a.emit_plot, "Also write a gnuplot script next to --out");
    app.add_flag("--quick", a.quick, "Use 10^5 samples");

    auto* point = app.add_subcommand("point", "Evaluate one configuration")->fallthrough();
    auto* sweep = app.add_subcommand("sweep", "Sweep the transmit SNR")->fallthrough();
    sweep->add_option("--vary", a.vary, "gamma0 or gamma0-pu")->capture_default_str();
    sweep->add_option("--start", a.start, "First grid point [dB]")->capture_default_str();
    sweep->add_option("--stop", a.stop, "Last grid point [dB]")->capture_default_str();
    sweep->add_option("--step", a.step, "Grid step [dB]")->capture_default_str();
    auto* fig2 = app.add_subcommand("figure2", "Rate versus gamma0, all protocols")->fallthrough();
    auto* fig3 = app.add_subcommand("figure3", "Rate versus gamma0P at gamma0S = 20 dB")->fallthrough();
    auto* validate = app.add_subcommand("validate", "Run the acceptance checks")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        if (*point) return run_point(a);
        if (*sweep) return run_sweep(a);
        if (*fig2) return run_figure(a, crul::figure2_preset());
        if (*fig3) return run_figure(a, crul::figure3_preset());
        if (*validate) return run_validate(a);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    } catch (const crul::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kUsage;
}
