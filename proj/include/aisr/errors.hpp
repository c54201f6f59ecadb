#pragma once

#include <stdexcept>
#include <string>

namespace aisr {

class InvalidPlan : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyPool : public std::invalid_argument {
public:
    EmptyPool() : std::invalid_argument("resource pool is empty") {}
};

/// A configuration value failed validation; field() names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Malformed input file. line() is 1-based; 0 when no line applies.
class FormatError : public std::runtime_error {
public:
    FormatError(std::size_t line, const std::string& message)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace aisr
