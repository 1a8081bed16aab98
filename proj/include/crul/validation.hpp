#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crul/analytic.hpp"
#include "crul/montecarlo.hpp"

namespace crul {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    double seconds = 0.0;
    double budget_seconds = 0.0; // 0 = no runtime budget
    std::string detail;
};

struct ValidationOptions {
    std::uint64_t seed = McConfig{}.seed;
    std::uint64_t n_samples = 1'000'000;
    unsigned threads = 0;
    int nodes = 100;
    double oracle_rel_tol = 1e-10;
    std::vector<int> only; // empty = all checks
};

// Options for --quick: 10^5 samples, same tolerances.
ValidationOptions quick_options(ValidationOptions base = {});

struct GridPointArbitration {
    double gamma0_db = 0.0;
    ArbitrationReport report;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    std::vector<GridPointArbitration> arbitration; // filled by check 5
    bool all_passed() const;
};

ValidationReport run_validation(const ValidationOptions& options);

// "id=<n> name=<s> status=PASS measured=<x> tolerance=<t> runtime_s=<s> detail"
std::string format_check(const CheckResult& check);

// JSON deviation report for the analytic-vs-oracle comparison.
std::string deviation_report_json(const ValidationReport& report);

// Independent E1 reference: adaptive integration of the representation
// E1(x) = int_0^1 exp(-x/s)/s ds.
double e1_reference(double x);

} // namespace crul
