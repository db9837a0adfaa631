#pragma once

#include <stdexcept>
#include <string>

namespace fraudkit {

// Error categories map 1:1 onto CLI exit codes.
enum class ErrorCategory {
    Config = 2,
    Data = 3,
    Training = 4,
    Io = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const { return category_; }
    int exit_code() const { return static_cast<int>(category_); }

private:
    ErrorCategory category_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& message) : Error(ErrorCategory::Config, message) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& message) : Error(ErrorCategory::Data, message) {}
};

class TrainingError : public Error {
public:
    explicit TrainingError(const std::string& message) : Error(ErrorCategory::Training, message) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error(ErrorCategory::Io, message) {}
};

}  // namespace fraudkit
