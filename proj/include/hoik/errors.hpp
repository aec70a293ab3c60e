#pragma once

#include <stdexcept>
#include <string>

namespace hoik {

// Error taxonomy used across the library. All derive from std::runtime_error
// (InvalidArgument from std::invalid_argument) so callers can catch broadly.

struct InvalidArgument : std::invalid_argument {
    explicit InvalidArgument(const std::string& msg) : std::invalid_argument(msg) {}
};

struct DegenerateGeometry : std::runtime_error {
    explicit DegenerateGeometry(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed kinematic tree: cycles, bad parent indices, wrong sizes.
struct StructuralError : std::runtime_error {
    explicit StructuralError(const std::string& msg) : std::runtime_error(msg) {}
};

// Inconsistent solver setup, e.g. target joint not on the active chain.
struct ConfigurationError : std::runtime_error {
    explicit ConfigurationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Point at or behind the camera plane.
struct ProjectionError : std::runtime_error {
    explicit ProjectionError(const std::string& msg) : std::runtime_error(msg) {}
};

// API misuse, e.g. backward before forward.
struct StateError : std::runtime_error {
    explicit StateError(const std::string& msg) : std::runtime_error(msg) {}
};

// File parsing / validation failures.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hoik
