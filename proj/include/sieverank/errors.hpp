#pragma once

#include <stdexcept>
#include <string>

namespace sieverank {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments, malformed configuration or bad command-line usage.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Problems with input data: missing files or columns, unparseable cells, empty samples.
class DataError : public Error {
public:
    using Error::Error;
};

/// The numerics could not produce an answer (rank-deficient design, constant fit, ...).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace sieverank
