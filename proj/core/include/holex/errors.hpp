#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace holex {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A system description violates a structural invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// An internal input is produced by zero or several models.
class AmbiguityError : public ValidationError {
public:
    AmbiguityError(std::string atom, std::string message)
        : ValidationError(std::move(message)), atom_(std::move(atom)) {}

    const std::string& atom() const noexcept { return atom_; }

private:
    std::string atom_;
};

/// A name is not part of the language it was looked up in.
class LookupError : public Error {
public:
    using Error::Error;
};

/// A query's preconditions do not hold (e.g. explanandum is not a final output).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Problem size exceeds a configured cap.
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

/// Problem size exceeds what the brute-force oracle will attempt.
class OracleScaleError : public ResourceLimitError {
public:
    using ResourceLimitError::ResourceLimitError;
};

/// No distribution satisfies the constraints. `core()` lists the labels of
/// the constraints in an irreducible conflicting subset when one was computed.
class InfeasibleError : public Error {
public:
    InfeasibleError(std::string message, std::vector<std::string> core = {})
        : Error(std::move(message)), core_(std::move(core)) {}

    const std::vector<std::string>& core() const noexcept { return core_; }

private:
    std::vector<std::string> core_;
};

/// An iterative solver stopped before meeting its residual targets.
class ConvergenceError : public Error {
public:
    ConvergenceError(std::string message, double constraint_residual, double stationarity_residual)
        : Error(std::move(message)),
          constraint_residual_(constraint_residual),
          stationarity_residual_(stationarity_residual) {}

    double constraint_residual() const noexcept { return constraint_residual_; }
    double stationarity_residual() const noexcept { return stationarity_residual_; }

private:
    double constraint_residual_;
    double stationarity_residual_;
};

/// Should never happen; indicates a solver bug.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace holex
