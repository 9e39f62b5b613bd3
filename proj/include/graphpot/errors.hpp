#pragma once

#include <stdexcept>
#include <string>

namespace graphpot {

// Bad user-supplied configuration: family parameters, config files, CLI input.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violated operation precondition (p < 2, K meets the horizon, ...).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A metric ball reached the truncation horizon; the caller must deepen the truncation.
struct TruncationEscape : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iterative solve did not converge. Carries the last residual seen.
struct SolverError : std::runtime_error {
    SolverError(const std::string& what, double residual)
        : std::runtime_error(what), last_residual(residual) {}
    double last_residual;
};

// Numerical output contradicts an exact monotonicity / theorem-level invariant.
// Signals a tolerance or estimator bug, not a mathematical finding.
struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A candidate search degenerated (all candidates were the zero function).
struct SearchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace graphpot
