#pragma once

#include <stdexcept>
#include <string>

namespace wwm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration (manifold, grid, run parameters).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// The (x,y) chart is undefined on the circle {w = 0}.
class ChartDomainError : public Error {
public:
    using Error::Error;
};

/// A radius or time requested by a diagnostic lies outside the grid/history.
class OutOfDomain : public Error {
public:
    using Error::Error;
};

/// The spherical energy is too small for a concentration scale to exist.
class NoScaleError : public Error {
public:
    using Error::Error;
};

/// The concentration scale dropped below what the grid can resolve.
class UnderResolved : public Error {
public:
    using Error::Error;
};

class CFLViolation : public Error {
public:
    using Error::Error;
};

/// Non-finite values appeared in the state; carries the offending time.
class BlowupDetected : public Error {
public:
    BlowupDetected(const std::string& what, double t) : Error(what), time_(t) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// An ODE integrator could not meet its tolerance.
class StepFailure : public Error {
public:
    using Error::Error;
};

}  // namespace wwm
