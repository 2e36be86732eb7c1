#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace broadwell {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point or shift fell outside the domain of a datum or lattice.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration: bad quadrature step, CFL violation, malformed input.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Lattice too small for the requested stencil.
class SizeError : public Error {
public:
    using Error::Error;
};

/// NaN or infinity appeared in a computed field.
class NumericError : public Error {
public:
    using Error::Error;
};

/// An output that must be non-negative went below the positivity tolerance.
class PositivityError : public Error {
public:
    using Error::Error;
};

/// Picard iteration hit max_iter before the update fell below tol_fix.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, std::vector<double> deltas,
                        std::vector<double> ratios)
        : Error(what), deltas_(std::move(deltas)), ratios_(std::move(ratios)) {}

    const std::vector<double>& deltas() const noexcept { return deltas_; }
    const std::vector<double>& ratios() const noexcept { return ratios_; }

private:
    std::vector<double> deltas_;
    std::vector<double> ratios_;
};

/// The global march stopped at slab `index`.
class MarchError : public Error {
public:
    MarchError(const std::string& what, std::size_t index, std::string diagnostics)
        : Error(what), index_(index), diagnostics_(std::move(diagnostics)) {}

    std::size_t index() const noexcept { return index_; }
    const std::string& diagnostics() const noexcept { return diagnostics_; }

private:
    std::size_t index_;
    std::string diagnostics_;
};

}  // namespace broadwell
