#pragma once

#include <stdexcept>
#include <string>

namespace specmon {

// Error categories map onto the CLI exit codes: usage 1, data 2, model 3.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& m) : std::runtime_error(m) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& m) : std::runtime_error(m) {}
};

struct ModelError : std::runtime_error {
    explicit ModelError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace specmon
