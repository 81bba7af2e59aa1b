#pragma once

#include <stdexcept>
#include <string>

namespace argen {

// Error categories map 1:1 onto process exit codes (see tools/argen_cli.cpp):
// 2 = config, 3 = data, 4 = numeric.
class Error : public std::runtime_error {
public:
    enum class Kind { Config = 2, Data = 3, Numeric = 4 };

    Error(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    Kind kind() const { return kind_; }
    int exit_code() const { return static_cast<int>(kind_); }

private:
    Kind kind_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(Kind::Config, msg) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(Kind::Data, msg) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(Kind::Numeric, msg) {}
};

// Shape/dimension violations are a flavour of numeric error.
class DimensionError : public NumericError {
public:
    explicit DimensionError(const std::string& msg) : NumericError(msg) {}
};

}  // namespace argen
