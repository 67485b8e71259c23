// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace csie {

using Complex = std::complex<double>;

// Precondition violated by the caller (bad index, argument on a branch cut, ...).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A computation ran but could not deliver the promised accuracy.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public NumericError {
public:
  using NumericError::NumericError;
};

// Invalid experiment configuration; field() names the offending entry.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

std::string format_complex(Complex z);

}  // namespace csie
