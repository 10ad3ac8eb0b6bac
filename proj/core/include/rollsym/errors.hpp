#pragma once

#include <stdexcept>
#include <string>

namespace rollsym {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input or violated precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

// A point, curve or stencil left the domain of a manifold.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Objects that must agree (manifolds, kinds, dimensions) do not.
class MismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace rollsym
