#pragma once

#include <stdexcept>
#include <string>

namespace ctsearch {

// Parameter outside the physical domain (E <= 0, N < 2, x outside [0,1], ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// x = 0: the initial state has no overlap with the target, so theta and phi
// are undefined and no transition can occur.
class DegenerateInstanceError : public DomainError {
 public:
  explicit DegenerateInstanceError(const std::string& what) : DomainError(what) {}
};

class DimensionMismatch : public std::invalid_argument {
 public:
  explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// Caller violated an operation precondition (step-size guard, dense cap,
// empty trajectory, too few samples, ...).
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace ctsearch
