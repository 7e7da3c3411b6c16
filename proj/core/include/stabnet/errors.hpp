#pragma once

#include <stdexcept>
#include <string>

namespace stabnet {

/// Malformed input text (JSON schema, rational syntax, DIMACS).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A documented precondition was violated (disconnected graph, negative
/// weight, out-of-range subsidy, method/instance mismatch, ...).
struct InvalidInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An enumeration or iteration guard was hit before completion.
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace stabnet
