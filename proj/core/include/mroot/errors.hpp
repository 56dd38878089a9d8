#ifndef MROOT_ERRORS_HPP
#define MROOT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mroot {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Syntax error in an expression string or a spec file, with the byte
// offset into the offending text.
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at position " + std::to_string(position) + ")"),
          pos(position) {}
    std::size_t pos;
};

// Division by zero, ln of a non-positive value, sqrt of a negative value.
struct SingularityError : Error {
    using Error::Error;
};

// Exact evaluation hit a value that has no rational representation
// (e.g. exp(1)).  Callers may retry in float mode.
struct TranscendentalError : Error {
    using Error::Error;
};

// det[T_ij] vanishes identically, or a numeric Hessian solve broke down.
struct DegenerateHessianError : Error {
    using Error::Error;
};

// Bad input data: malformed spec file, unit-norm violation, failed
// operation precondition.
struct SpecError : Error {
    using Error::Error;
};

// A mathematically guaranteed identity failed to hold.  Always a bug in
// this library or a breach of a documented hypothesis; never swallowed.
struct InvariantViolationError : Error {
    using Error::Error;
};

}  // namespace mroot

#endif
