#pragma once

#include <stdexcept>
#include <string>

namespace sunada_lab {

/// Malformed or out-of-contract arguments (mismatched moduli, composite
/// primes, failed preconditions).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

class SingularMatrixError : public std::domain_error {
 public:
  explicit SingularMatrixError(const std::string& what)
      : std::domain_error(what) {}
};

/// Group closure grew past the configured element cap.
class SizeLimitError : public std::length_error {
 public:
  explicit SizeLimitError(const std::string& what) : std::length_error(what) {}
};

/// An exhaustive search finished without a witness.
class NotFoundError : public std::runtime_error {
 public:
  explicit NotFoundError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sunada_lab
