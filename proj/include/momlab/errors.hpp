#pragma once

#include <stdexcept>
#include <string>

namespace momlab {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain (NaN, x <= 0 where forbidden).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Argument sits on a pole of Gamma.
class PoleError : public Error {
public:
    using Error::Error;
};

/// A caller-side contract was violated (bad sizes, unsorted angles, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A numerical method could not reach its stated accuracy.
class AccuracyError : public Error {
public:
    using Error::Error;
};

/// A computed quantity contradicts a known identity (e.g. a negative expectation).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// A closed form was requested outside its region of finiteness.
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// A random matrix failed its structural checks.
class ConstructionError : public Error {
public:
    using Error::Error;
};

/// Eigenvalue structure does not match the group.
class ExtractionError : public Error {
public:
    using Error::Error;
};

} // namespace momlab
