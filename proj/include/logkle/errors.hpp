#pragma once

#include <stdexcept>
#include <string>

namespace logkle {

/// Argument outside the mathematical domain of an operation
/// (j < 1, t outside [t0, T], p outside (0, 1), ...).
class DomainError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

/// An iterative solver (root bracketing, Newton on a recurrence) did not
/// reach its tolerance. Signals a bug rather than bad input.
class ConvergenceError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A tensor-product grid would exceed the node budget.
class TensorSizeError : public std::length_error
{
public:
  using std::length_error::length_error;
};

/// Invalid or inconsistent run configuration.
class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

} // namespace logkle
