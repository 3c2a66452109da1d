#pragma once

#include <stdexcept>
#include <string>

namespace auxnet {

// Raised when a caller violates a documented precondition (shape mismatch,
// index out of range, invalid configuration).
class ContractError : public std::invalid_argument {
public:
    explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised for malformed input data (unparseable files, ragged rows,
// inconsistent stream dimensionality).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a file cannot be opened, read or written; the message carries
// the path.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace auxnet
