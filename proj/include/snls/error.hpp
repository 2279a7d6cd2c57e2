#pragma once

#include <stdexcept>
#include <string>

namespace snls {

/// Base of every error the toolkit throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad n, b out of range, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Two objects that must share a grid (or parameters) do not.
class MismatchError : public Error {
public:
    using Error::Error;
};

/// Floating-point trouble: overflow guard, non-finite samples, blow-up.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration; the message starts with the offending key path.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error(key + " " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

} // namespace snls
