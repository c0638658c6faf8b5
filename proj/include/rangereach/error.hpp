#pragma once

#include <stdexcept>
#include <string>

namespace rangereach {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or unreadable input (graph files, workload CSV, CLI arguments).
class InputError : public Error {
public:
    using Error::Error;
};

/// Corrupt, truncated or incompatible binary index file.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Index/workload paired with a graph it was not built from.
class FingerprintMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace rangereach
