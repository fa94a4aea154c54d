#pragma once

#include <stdexcept>
#include <string>

namespace ma2 {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A point lies outside the computational domain by more than the location tolerance.
class OutOfDomainError : public Error {
public:
    using Error::Error;
};

/// Mesh data violates a structural invariant (non-conforming, inverted triangle, ...).
class MeshError : public Error {
public:
    using Error::Error;
};

/// A sparse linear solve failed or did not meet the residual contract.
class LinearSolverError : public Error {
public:
    using Error::Error;
};

/// Config file could not be parsed or holds an invalid value; carries the key path.
class ConfigError : public Error {
public:
    ConfigError(const std::string& key, const std::string& what)
        : Error("config key '" + key + "': " + what), key_(key) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

} // namespace ma2
