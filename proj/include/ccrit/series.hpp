#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ccrit {

/// Result of a truncated summation: the value, an absolute bound on the
/// neglected tail, and the number of terms actually evaluated.
struct SeriesValue {
    double value = 0.0;
    double error_bound = 0.0;
    std::int64_t terms_used = 0;
};

/// Stopping rule shared by every truncated sum. A sum stops once its tail
/// bound drops below max(abs_tol, rel_tol * |partial sum|); max_index caps
/// each summation index and exceeding it raises budget_error.
struct TruncationPolicy {
    double rel_tol = 1e-13;
    double abs_tol = 1e-16;
    std::int64_t max_index = 1000000;

    void validate() const;

    TruncationPolicy with_rel_tol(double r) const {
        TruncationPolicy t = *this;
        t.rel_tol = r;
        return t;
    }
};

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the documented domain of an operation.
struct domain_error : error {
    using error::error;
};

// Evaluation lands on (or within the refusal window of) a Gamma/zeta pole.
struct pole_error : error {
    using error::error;
};

// A sum does not converge for the requested exponent.
struct nonconvergence_error : error {
    using error::error;
};

// max_index exhausted before the tolerance was met.
struct budget_error : error {
    using error::error;
};

// The gap equation has no disordered-phase root m^2 >= 0.
struct no_solution_error : error {
    using error::error;
};

} // namespace ccrit
