#pragma once

#include <stdexcept>
#include <string>

namespace uavplan {

// Config text could not be parsed (message names line/column or key).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A value violates a documented invariant; field() names the offending key.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Input outside the domain of a model (e.g. Hata frequency range).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Caller passed arguments that break a precondition.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
public:
    IoError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace uavplan
