#ifndef CURVIREG_ERRORS_HPP
#define CURVIREG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace curvireg {

// Invalid argument values (bad sigma, empty grids, mismatched sizes).
struct ParameterError : std::invalid_argument {
    explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Input that parses but is geometrically unusable (collinear points, empty mesh).
struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numeric computation left its valid domain (complex spectrum, singular factor).
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// File-format violations; carries a position where known.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem-level failures (missing file, short read/write).
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace curvireg

#endif
