// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peelwave authors

#pragma once

#include <stdexcept>
#include <string>

namespace peelwave {

/// A numerical routine (root bracketing, series, continued fraction, ...)
/// failed to converge within its iteration budget.
class convergence_error : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// The requested operation does not apply to the critical regime at hand
/// (e.g. asking for the supercritical fixed-point pair of a subcritical map).
class regime_error : public std::domain_error {
 public:
    using std::domain_error::domain_error;
};

/// Moment-ratio inversion could not match the data to a shape parameter.
class estimation_error : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Experiment config file could not be parsed. Carries a 1-based line number.
class config_error : public std::runtime_error {
 public:
    config_error(const std::string& msg, int line)
        : std::runtime_error("config line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

 private:
    int line_;
};

/// File could not be opened, read or written.
class io_error : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

}  // namespace peelwave
