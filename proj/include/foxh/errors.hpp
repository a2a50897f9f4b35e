#pragma once

#include <stdexcept>
#include <string>

namespace foxh {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument lies on a pole of a gamma factor.
class PoleError : public Error {
public:
    using Error::Error;
};

// Parameters break a stated precondition (bad H spec, r <= 0, x = 0, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Configuration the numerics do not handle (order >= 3 poles, alpha* <= 0, ...).
class Unsupported : public Error {
public:
    using Error::Error;
};

// Series or quadrature failed to reach tolerance.
class ConvergenceError : public Error {
public:
    double achieved_error;
    ConvergenceError(const std::string& what, double err)
        : Error(what), achieved_error(err) {}
};

}  // namespace foxh
