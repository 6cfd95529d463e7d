#pragma once

#include <stdexcept>
#include <string>

namespace psys {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the region where an operation is defined (e.g. u > 0 for q).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Riccati denominator 1 + beta0*K reached zero: gradient catastrophe.
class BlowUpError : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

class NonFiniteState : public Error {
public:
    using Error::Error;
};

/// Maximum characteristic speed vanished; carries the fallback step.
class DegenerateSpeed : public Error {
public:
    DegenerateSpeed(const std::string& what, double fallback)
        : Error(what), fallback_dt(fallback) {}
    double fallback_dt;
};

class EllipticStart : public Error {
public:
    using Error::Error;
};

class WindowTooShort : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace psys
