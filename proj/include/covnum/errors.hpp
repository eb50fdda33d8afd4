#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace covnum {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input outside the supported integer range, or a result that would overflow.
class RangeError : public Error {
public:
    using Error::Error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// The divisibility hypothesis p_t - 1 | p_{t+1} - 1 of the primitive plan fails.
class DivisibilityPreconditionError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

// The size hypothesis p_r >= (p_{r-1} - 2)(p_{r-1} - 3) of the primitive plan fails.
class SizePreconditionError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

// The residue sieve would exceed its size bound.
class SieveBoundError : public Error {
public:
    using Error::Error;
};

// Malformed cover / cache / catalog input.
class ParseError : public Error {
public:
    using Error::Error;
};

// A search hit its node or time limit before reaching an answer.  This is a
// third outcome: it never means "not covering".
class BudgetExceeded : public Error {
public:
    BudgetExceeded(std::uint64_t n, const std::string& what)
        : Error("budget exceeded while deciding n=" + std::to_string(n) + ": " + what), n_(n) {}

    std::uint64_t n() const noexcept { return n_; }

private:
    std::uint64_t n_;
};

}  // namespace covnum
