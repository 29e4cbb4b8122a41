#ifndef SPARSELAB_ERRORS_HPP
#define SPARSELAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sparselab {

// Base class for all recoverable errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidInputError : Error {
    using Error::Error;
};

// Requested cube / region does not line up with grid cells.
struct AlignmentError : Error {
    using Error::Error;
};

// Quadrature or grid resolution too coarse for the requested operation.
struct ResolutionError : Error {
    using Error::Error;
};

struct ScaleError : Error {
    using Error::Error;
};

struct TruncationError : Error {
    using Error::Error;
};

struct UnsupportedDimensionError : Error {
    using Error::Error;
};

// A numerical search ended without an acceptable candidate.
struct SearchFailureError : Error {
    using Error::Error;
};

struct DepthError : Error {
    using Error::Error;
};

struct ModeError : Error {
    using Error::Error;
};

struct DegenerateInputError : Error {
    using Error::Error;
};

}  // namespace sparselab

#endif
