#pragma once

#include <stdexcept>
#include <string>

namespace oksvm {

// Invalid arguments or configuration supplied by the caller.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input data that cannot be used: malformed files, degenerate class counts.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A dual solution with no support vectors cannot define a decision function.
class DegenerateModelError : public DataError {
public:
    using DataError::DataError;
};

}  // namespace oksvm
