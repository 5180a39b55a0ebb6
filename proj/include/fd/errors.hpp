#pragma once

#include <stdexcept>
#include <string>

namespace fd {

// Bad caller input: non-finite values, out-of-range indices, invalid sizes.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input outside the mathematical domain of an operation (theta = 0, x < 0, A <= 0).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Argument beyond the range where an evaluator has been validated.
struct RangeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Parameters outside the regime an evaluator was built for.
struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical target not reached; carries the best estimate seen.
struct AccuracyError : std::runtime_error {
    AccuracyError(const std::string& what, double estimate, double bound)
        : std::runtime_error(what), estimate(estimate), bound(bound) {}
    double estimate;
    double bound;
};

// A truncated sum whose first omitted terms are not negligible.
struct WindowError : AccuracyError {
    using AccuracyError::AccuracyError;
};

}  // namespace fd
