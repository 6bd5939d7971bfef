#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace dslit {

/// A physical parameter failed validation. `field()` names the offending input.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// The oracle's k-quadrature did not settle under node doubling.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double change)
        : std::runtime_error(what), change_(change) {}

    double change() const noexcept { return change_; }

private:
    double change_;
};

/// A NaN or infinity showed up where the math guarantees a finite value.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unreadable or inconsistent run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Output could not be written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dslit
