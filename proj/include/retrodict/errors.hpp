// Copyright 2026 the retrodict authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace retrodict {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shapes of two operands do not match, or an operation got an
// unsupported dimension.
struct DimensionMismatch : Error {
  using Error::Error;
};

// A value fails its type invariant (not a probability vector, not
// column-stochastic, not a density operator, ...).
struct InvalidValue : Error {
  using Error::Error;
};

// The pushforward of the reference prior is too close to singular for
// the retrodiction map to be formed.
struct SingularPushforward : Error {
  using Error::Error;
};

// Iterative scheme found neither a fixed point nor a short cycle.
struct NoConvergence : Error {
  using Error::Error;
};

// Block constructor preconditions violated.
struct InvalidBlocks : Error {
  using Error::Error;
};

// Closed-form evaluation requested outside its domain.
struct DomainError : Error {
  using Error::Error;
};

// An input table or data file contained no usable rows.
struct NoData : Error {
  using Error::Error;
};

}  // namespace retrodict
