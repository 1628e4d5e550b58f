#pragma once

#include <stdexcept>
#include <string>

namespace unidense {

// Ill-formed structure: overlapping union operands, pattern outside period, ...
class StructuralError : public std::runtime_error {
 public:
  explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

// A computation needs a window or interval count beyond the configured budget.
class HorizonError : public std::runtime_error {
 public:
  explicit HorizonError(const std::string& what) : std::runtime_error(what) {}
};

// Exact-mode operation on a real-mode set, or mixing modes without conversion.
class ModeError : public std::runtime_error {
 public:
  explicit ModeError(const std::string& what) : std::runtime_error(what) {}
};

// A generator family violated its declared invariants (monotone endpoints).
class InvariantError : public std::runtime_error {
 public:
  explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

// Numeric quadrature failed to reach the requested accuracy.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace unidense
