#pragma once

#include <stdexcept>
#include <string>

namespace gearcheck {

// Base class for every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad or degenerate input data: malformed files, too-short signals,
// constant signals whose features are undefined.
class DataError : public Error {
public:
    using Error::Error;
};

// The numerics failed on otherwise valid input (solver non-convergence).
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace gearcheck
