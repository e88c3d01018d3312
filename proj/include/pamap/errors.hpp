#pragma once

#include <stdexcept>
#include <string>

namespace pamap {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the map's domain, or mismatched domains.
struct DomainError : Error {
    using Error::Error;
};

// range(f) not contained in domain(g), or incompatible endpoints.
struct CompositionError : Error {
    using Error::Error;
};

// Operation not defined for this input (plateau at a queried level, ...).
struct UnsupportedError : Error {
    using Error::Error;
};

// An exact invariant that must hold by construction failed.
struct InvariantViolation : Error {
    using Error::Error;
};

// A piece/step/candidate budget was exhausted. Payload-carrying variants
// derive from this in the headers that own the payload type.
struct BudgetError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

}  // namespace pamap
