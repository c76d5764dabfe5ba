#pragma once

#include <stdexcept>
#include <string>

namespace seqrank {

// Process exit codes used by the CLI. Library errors carry one of these so
// callers can map failures to a stable shell contract.
enum class ExitCode : int {
    ok = 0,
    internal = 1,
    usage = 2,
    parse = 3,
    degeneracy = 4,
    disconnected = 5,
};

class Error : public std::runtime_error {
public:
    Error(ExitCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    ExitCode exit_code() const noexcept { return code_; }

private:
    ExitCode code_;
};

// Bad configuration or bad arguments (mismatched item sets, invalid flags, n too small).
class UsageError : public Error {
public:
    explicit UsageError(const std::string& msg) : Error(ExitCode::usage, msg) {}
};

// Malformed input data (CSV rows, missing columns, unreadable JSON).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(ExitCode::parse, msg) {}
};

// An iterative solver ran out of iterations; carries the final residual.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double residual)
        : Error(ExitCode::degeneracy, msg), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_ = 0.0;
};

// An eigenproblem whose answer is not unique (repeated extremal eigenvalue,
// undefined angle, all-tie similarity).
class DegeneracyError : public Error {
public:
    explicit DegeneracyError(const std::string& msg) : Error(ExitCode::degeneracy, msg) {}
};

// The measurement graph does not connect all items, so relative order across
// components is unidentifiable.
class DisconnectedGraphError : public Error {
public:
    explicit DisconnectedGraphError(const std::string& msg) : Error(ExitCode::disconnected, msg) {}
};

// A constructed value violated a type invariant. Program error, not user error.
class InvariantError : public Error {
public:
    explicit InvariantError(const std::string& msg) : Error(ExitCode::internal, msg) {}
};

} // namespace seqrank
