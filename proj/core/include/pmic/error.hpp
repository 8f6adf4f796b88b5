#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pmic {

/// Bad input: wrong shapes, out-of-range parameters, missing tags.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed EMB1 payload. Carries the byte offset where decoding stopped.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
        detail_(what),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  std::size_t offset_;
};

/// Numerical failure during inference or scoring.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, int iterations, double grad_norm)
      : NumericalError(what + ": " + std::to_string(iterations) +
                       " iterations, final gradient inf-norm " + std::to_string(grad_norm)),
        iterations_(iterations),
        grad_norm_(grad_norm) {}
  int iterations() const noexcept { return iterations_; }
  double grad_norm() const noexcept { return grad_norm_; }

 private:
  int iterations_;
  double grad_norm_;
};

/// Raised when Λa + Λb − Λ0 is not positive definite: the two posteriors are,
/// taken together, less informative than the prior.
class JointPosteriorUndefined : public NumericalError {
 public:
  explicit JointPosteriorUndefined(double min_eigenvalue)
      : NumericalError("joint posterior undefined: combined precision has smallest eigenvalue " +
                       std::to_string(min_eigenvalue)),
        min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

class UnderflowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace pmic
