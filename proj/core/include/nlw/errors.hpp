#pragma once

#include <stdexcept>
#include <string>

namespace nlw {

// Base for every error thrown by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad parameters, violated preconditions, malformed config or files.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Initial data or a requested diagnostic reaches outside the padded domain.
class PaddingViolation : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Solver non-convergence, NaN/Inf in a field.
class NumericalFault : public Error {
 public:
  using Error::Error;
};

// Grid or search size beyond the configured caps.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

}  // namespace nlw
