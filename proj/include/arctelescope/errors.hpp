#pragma once

#include <stdexcept>
#include <string>

namespace arctelescope {

/// Malformed request: unknown identity id, unknown parameter name, bad flag.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters outside a record's or theorem's admissible domain (e.g. j = 0 where j != 0 is required).
class ConstraintError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Mathematically undefined input (zero radicand request, arctan(0/0), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A summand whose denominator G*G' + lambda^2 vanishes.
class TermUndefinedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The telescoping remainder does not shrink below the requested tolerance.
class NoConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace arctelescope
