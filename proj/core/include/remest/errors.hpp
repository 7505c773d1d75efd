#pragma once

#include <stdexcept>
#include <string>

namespace remest {

// Fixed-point iteration ran out of iterations; carries the last residual.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// Invalid or inconsistent experiment configuration. `field` is the path of
// the offending entry ("policies[2].epsilon", "model.A", ...), empty when
// the problem is not tied to a single field.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, std::string field = {})
        : std::runtime_error(field.empty() ? what : field + ": " + what),
          message_(what),
          field_(std::move(field)) {}

    const std::string& message() const noexcept { return message_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::string message_;
    std::string field_;
};

// Filesystem problem (unreadable config, unwritable output path).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Requested quantity requires a stabilizable channel bank (theta* > theta_c).
class StabilizabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace remest
