#pragma once

#include <stdexcept>
#include <string>

namespace casreg {

// Base class for all library errors so callers can catch everything at once.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A caller violated a documented precondition (bad value, bad range).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Vector/matrix widths do not line up.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Dataset integrity violation (duplicate ids, inconsistent patient labels, ...).
class DataError : public Error {
public:
    using Error::Error;
};

// Malformed text input: CSV rows, JSON documents, config files.
class ParseError : public Error {
public:
    using Error::Error;
};

// Filesystem failure.
class IoError : public Error {
public:
    using Error::Error;
};

// Non-finite value detected where the algorithm requires finite numbers.
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace casreg
