#pragma once

#include <stdexcept>

namespace fdst {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad arguments: odd r*n, r out of range, disconnected input where a
/// connected graph is required, mismatched r between compared series.
class InvalidInput : public Error {
public:
    using Error::Error;
};

class AttemptsExhausted : public Error {
public:
    using Error::Error;
};

/// Exact oracle refused an instance larger than its enumeration guard.
class SizeGuardExceeded : public Error {
public:
    using Error::Error;
};

/// Unrevealed-point mass z_M dropped below its floor during integration.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// Phase-2 mixing weight undefined (tau <= 0 or tau + alpha <= 0).
class BlendDegenerate : public Error {
public:
    using Error::Error;
};

class InvariantViolation : public Error {
public:
    using Error::Error;
};

}  // namespace fdst
