#pragma once

#include <stdexcept>
#include <string>

namespace cde {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The instance (or a coalition/partition used with it) is malformed.
class InvalidInstance : public Error {
public:
    using Error::Error;
};

/// A precondition on an argument does not hold.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// An enumeration or check was asked to run beyond its configured size limit.
class LimitExceeded : public Error {
public:
    using Error::Error;
};

/// An internal invariant was broken; the result cannot be trusted.
class InvariantBreach : public Error {
public:
    using Error::Error;
};

}  // namespace cde
