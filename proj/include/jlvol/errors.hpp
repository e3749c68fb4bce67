#pragma once

#include <stdexcept>
#include <string>

namespace jlvol {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: mismatched dimensions, non-finite values, bad shapes.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// Input is well-formed but violates a numeric invariant (e.g. a basis that
/// is not orthonormal).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// An operation's precondition does not hold for the given input.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Iterative solver gave up or hit a degenerate state.
class SolverError : public Error {
public:
    using Error::Error;
};

/// Body has no interior, is unbounded, or otherwise degenerate.
class DegenerateBodyError : public Error {
public:
    using Error::Error;
};

/// Requested computation is not supported at this dimension.
class UnsupportedDimensionError : public Error {
public:
    using Error::Error;
};

}  // namespace jlvol
