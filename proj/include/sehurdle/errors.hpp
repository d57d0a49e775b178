#pragma once

#include <stdexcept>

namespace sehurdle {

// Malformed input text (dates, CSV rows, JSON fields).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter or argument outside the mathematical domain of an operation.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Every optimizer start failed or the data cannot support a fit.
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An infinite sum could not be truncated within the requested horizon.
struct HorizonError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace sehurdle
