#pragma once

#include <stdexcept>
#include <string>

namespace lossaverse {

/// Base of every error raised by the library. Each category maps onto one
/// CLI exit status (see exit_code()).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 1; }
};

/// Malformed text: rationals, game documents, scenario files.
class ParseError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

/// A well-formed value that violates a precondition or an invariant.
class ValidationError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
};

/// Unknown action, state or item label.
class LookupError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Wrong dimensions for an operation (e.g. the 2x2 solver on a 3x2 game).
class ShapeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A construction that requires a specific attack class was handed another.
class ClassificationError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Enumeration or search would exceed its budget.
class CapacityError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 4; }
};

/// A proven implication failed on a concrete instance. Always an engine bug,
/// never a user error.
class ConsistencyError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 5; }
};

} // namespace lossaverse
