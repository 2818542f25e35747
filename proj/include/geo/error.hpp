#pragma once

#include <stdexcept>
#include <string>

namespace geo {

/// Failure categories. The CLI maps these onto its exit codes.
enum class ErrorKind {
  invalid_argument,
  domain,         // a point or path left the admissible set
  convexity,      // U-average fell outside U(M)
  numerical,      // Newton divergence, singular Jacobian, non-SPD input
  integrability,  // curl / symmetry condition failed
  parse,
};

const char* to_string(ErrorKind kind) noexcept;

class GeoError : public std::runtime_error {
 public:
  GeoError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace geo
