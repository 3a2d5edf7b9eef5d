#pragma once

#include <stdexcept>
#include <string>

namespace zetalab {

enum class ErrorKind {
  pole,
  precision_failure,
  invalid_range,
  invalid_argument,
  invalid_delta,
  domain_error,
  parse_error,
  validation_error,
  missing_prime,
  missing_eigenvalues,
  ill_conditioned_fit,
  capacity_exceeded,
  unknown_kernel,
  io_error,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::pole: return "pole";
    case ErrorKind::precision_failure: return "precision-failure";
    case ErrorKind::invalid_range: return "invalid-range";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::invalid_delta: return "invalid-delta";
    case ErrorKind::domain_error: return "domain-error";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::validation_error: return "validation-error";
    case ErrorKind::missing_prime: return "missing-prime";
    case ErrorKind::missing_eigenvalues: return "missing-eigenvalues";
    case ErrorKind::ill_conditioned_fit: return "ill-conditioned-fit";
    case ErrorKind::capacity_exceeded: return "capacity-exceeded";
    case ErrorKind::unknown_kernel: return "unknown-kernel";
    case ErrorKind::io_error: return "io-error";
  }
  return "error";
}

}  // namespace zetalab
