#pragma once

#include <stdexcept>
#include <string>

namespace pom {

// Base class for everything this library throws.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Operand dimensions do not match the operation's contract.
struct ShapeError : Error {
    using Error::Error;
};

// Value-level violation: bad exponent, non-binary mask entry, dims < 1, ...
struct DomainError : Error {
    using Error::Error;
};

// Sequence of length zero where at least one token is required.
struct EmptySequenceError : Error {
    using Error::Error;
};

// A streamed block exceeds the configured block size K.
struct BlockSizeError : Error {
    using Error::Error;
};

// An attention mask row with no visible position (softmax undefined).
struct DegenerateMaskError : Error {
    using Error::Error;
};

// Sequence longer than the positional table.
struct LengthError : Error {
    using Error::Error;
};

// A function handed to the finite-difference probe produced NaN/Inf.
struct NonFiniteError : Error {
    using Error::Error;
};

// Fixture file does not parse against the schema.
struct FixtureSchemaError : Error {
    using Error::Error;
};

// Fixture recomputation drifted beyond the stored tolerance.
struct ToleranceError : Error {
    using Error::Error;
};

}  // namespace pom
