#ifndef COSCI_ERRORS_HPP
#define COSCI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cosci {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Array/tensor dimensions do not match what an operation requires.
class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& what) : Error(what) {}
};

/// A file could not be tokenized (bad field, bad header).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

/// Values violate a data invariant (NaN fields, empty classes, ...).
class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(what) {}
};

/// Invalid configuration (bad fractions, unknown keys, empty split sides).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Non-finite values appeared where finite math was expected.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(what) {}
};

/// Operation called in the wrong order (backward before forward, ...).
class StateError : public Error {
public:
    explicit StateError(const std::string& what) : Error(what) {}
};

/// Filesystem failure.
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

/// Checkpoint file is truncated or does not match the expected format.
class CorruptFileError : public Error {
public:
    explicit CorruptFileError(const std::string& what) : Error(what) {}
};

} // namespace cosci

#endif // COSCI_ERRORS_HPP
