#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ringwave {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the region where a model is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative solver failed to converge. Carries the last residual vector.
class NumericError : public Error {
public:
    NumericError(const std::string& what, std::vector<double> residuals = {})
        : Error(what), residuals_(std::move(residuals)) {}

    const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
    std::vector<double> residuals_;
};

/// The inputs do not pin down a unique answer (e.g. fitting an unloaded line).
class UnderdeterminedError : public Error {
public:
    using Error::Error;
};

/// Invalid circuit topology or element values.
class TopologyError : public Error {
public:
    using Error::Error;
};

/// Configuration/schema violation. `field()` is the dotted path of the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace ringwave
