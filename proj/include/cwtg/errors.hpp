// Copyright 2026 The cwtg Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace cwtg {

/// A parameter violates a type invariant or an operation precondition.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument lies outside the domain of a function (|s| > N, |t| >= 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested computation is outside the high-temperature regime it needs.
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A problem instance exceeds a hard size bound of the engine.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class ComplexityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cwtg
