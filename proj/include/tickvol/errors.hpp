#pragma once

#include <stdexcept>
#include <string>

namespace tickvol {

/// Malformed input file content. Message carries "path:line: reason".
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Timestamp regression inside a stream that must be time-sorted.
struct OrderingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid configuration (bad window, bad parameter combination, missing path).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Precondition violation on an estimator input (division by zero,
/// undefined characteristic time, empty book, ...).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace tickvol
