#pragma once

#include <stdexcept>
#include <string>

namespace wsi {

// Malformed or inconsistent input data (files, labelings). The CLI maps this
// to exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid configuration or parameter combination. The CLI maps this to
// exit code 1.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace wsi
