#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace isqnls {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid model parameters, grid bounds or operation arguments.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// An operation received an input for which it is undefined (e.g. the zero field).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A numerical kernel failed (singular pivot, NaN, ...).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Sampling too irregular for a fixed finite-difference stencil.
class StencilError : public Error {
public:
    using Error::Error;
};

/// Iterative solver exhausted its budget. Carries the last iterate and the
/// residual history so callers can inspect or restart.
class ConvergenceError : public Error {
public:
    ConvergenceError(std::string const& what, std::vector<double> last_iterate,
                     std::vector<double> residual_history)
        : Error(what),
          last_iterate_(std::move(last_iterate)),
          residual_history_(std::move(residual_history)) {}

    std::vector<double> const& last_iterate() const noexcept { return last_iterate_; }
    std::vector<double> const& residual_history() const noexcept { return residual_history_; }

private:
    std::vector<double> last_iterate_;
    std::vector<double> residual_history_;
};

/// The minimization collapsed onto the zero field.
class DegenerateMinimizerError : public Error {
public:
    using Error::Error;
};

/// Shooting could not bracket the decaying solution.
class BracketError : public Error {
public:
    BracketError(std::string const& what, double a_lo, double a_hi)
        : Error(what), a_lo_(a_lo), a_hi_(a_hi) {}

    double a_lo() const noexcept { return a_lo_; }
    double a_hi() const noexcept { return a_hi_; }

private:
    double a_lo_;
    double a_hi_;
};

/// Malformed configuration document.
class ParseError : public Error {
public:
    ParseError(std::string const& what, long line) : Error(what), line_(line) {}
    long line() const noexcept { return line_; }

private:
    long line_;
};

} // namespace isqnls
