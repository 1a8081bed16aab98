#pragma once

#include <stdexcept>
#include <string>

namespace crul {

// Raised when an argument lies outside an operation's mathematical domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Raised when a numerical procedure cannot deliver a finite, converged result.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what, double where = 0.0, double achieved = 0.0)
        : std::runtime_error(what), where_(where), achieved_(achieved) {}

    // Abscissa (node, argument) at which the failure was detected.
    double where() const noexcept { return where_; }
    // Achieved error estimate, when the failure is a tolerance miss.
    double achieved() const noexcept { return achieved_; }

private:
    double where_;
    double achieved_;
};

} // namespace crul
