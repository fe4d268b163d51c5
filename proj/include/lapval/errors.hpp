#pragma once

#include <stdexcept>
#include <string>

namespace lapval {

// Base of every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

// Body or simplex is lower dimensional where a full-dimensional one is required.
struct DegenerateInput : Error {
    using Error::Error;
};

// Parameter outside its mathematical domain (lambda not in (0,1), k < 1, ...).
struct DomainError : Error {
    using Error::Error;
};

struct SizeLimitError : Error {
    using Error::Error;
};

struct SingularMap : Error {
    using Error::Error;
};

struct OverlapError : Error {
    using Error::Error;
};

// h(0) != 0
struct ZeroViolation : Error {
    using Error::Error;
};

// |h(a)| > gamma |a| somewhere on the sample
struct GrowthViolation : Error {
    using Error::Error;
};

struct ContinuityViolation : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

}  // namespace lapval
