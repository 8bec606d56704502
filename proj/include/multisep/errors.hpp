#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace multisep {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid argument: bad cuts, malformed partitions, shape mismatches.
struct ArgumentError : Error {
    using Error::Error;
};

/// Amplitude array length inconsistent with the declared dimensions.
struct DimensionError : ArgumentError {
    using ArgumentError::ArgumentError;
};

/// Multi-index or offset outside the declared dimensions.
struct IndexError : Error {
    using Error::Error;
};

/// Attempt to normalize a zero vector.
struct NormalizationError : Error {
    using Error::Error;
};

/// Problem size beyond the supported dense tensor scale.
struct CapacityError : Error {
    using Error::Error;
};

/// Malformed state, density, or map file.
struct FormatError : Error {
    using Error::Error;
};

/// Ket expression rejected by the grammar; carries the byte offset.
struct SyntaxError : Error {
    SyntaxError(const std::string& message, std::size_t at)
        : Error("syntax error at byte " + std::to_string(at) + ": " + message), offset(at) {}
    std::size_t offset;
};

/// Grammar-conforming ket expression with out-of-range content.
/// `factor` is the 1-based factor number, or 0 when not tied to one.
struct SemanticError : Error {
    SemanticError(const std::string& message, std::size_t at, int which_factor)
        : Error("semantic error at byte " + std::to_string(at) + ": " + message),
          offset(at),
          factor(which_factor) {}
    std::size_t offset;
    int factor;
};

}  // namespace multisep
