#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qcomp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Precondition violated by the caller: length mismatch, index out of range,
// illegal distribution, malformed structure.
struct InvalidInput : Error {
    using Error::Error;
};

// Conditioning on an event of probability zero.
struct ZeroProbabilityEvent : Error {
    using Error::Error;
};

// A quantity that must hold by construction did not. Always a bug.
struct ConsistencyError : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : Error(line == 0 ? what
                          : what + " (line " + std::to_string(line) + ", column " +
                                std::to_string(column) + ")"),
          line(line), column(column) {}

    std::size_t line;
    std::size_t column;
};

} // namespace qcomp
