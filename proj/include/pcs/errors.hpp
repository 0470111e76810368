// Exception types shared across the toolkit.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pcs {

// Arguments violate an operation's preconditions (length/domain mismatch,
// out-of-range values, empty inputs).
class InvalidInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A crowdsourcing policy cannot be realized within its budget.
class InfeasiblePolicyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A dataset or config file failed to parse or validate.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    FormatError(const std::string& file, std::size_t row, std::size_t column,
                const std::string& message)
        : std::runtime_error(file + ":" + std::to_string(row) + ":" +
                             std::to_string(column) + ": " + message) {}
};

// Experiment configuration is invalid; raised before any output is produced.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Problem size exceeds what an exact algorithm supports.
class UnsupportedSizeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace pcs
