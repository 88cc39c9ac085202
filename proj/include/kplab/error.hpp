#pragma once

#include <stdexcept>
#include <string>

namespace kplab {

/// Failure categories. The CLI maps these onto its exit codes.
enum class ErrorKind {
    InvalidArgument,    // violated precondition or malformed input
    UnknownSymbol,      // symbol selector does not resolve
    DegenerateSymbol,   // vanishing denominator in the Stokes coefficients
    Inapplicable,       // asymptotic prediction requested outside its (sigma, m) regime
    NoConvergence,      // Newton or eigensolver failure
    VerificationFailed  // band measurement found no instability
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace kplab
