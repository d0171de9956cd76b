#pragma once

#include <stdexcept>
#include <string>

namespace predprey {

/// Input outside an operation's domain (negative abundance, NaN, shape mismatch).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Model fails a structural assumption an operation requires (A1..A5, sign hypotheses).
struct AssumptionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed configuration: unknown key, bad family tag, proposition hypothesis mismatch.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numerical procedure could not complete (bracket not found, step collapse, non-finite state).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Monotone iteration produced an out-of-order step; indicates an invalid K or box.
struct MonotonicityError : NumericalError {
    int step;
    MonotonicityError(int step_, const std::string& what)
        : NumericalError(what), step(step_) {}
};

} // namespace predprey
