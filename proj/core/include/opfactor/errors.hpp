#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace opfactor {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent caller input (shape mismatch, non-finite
/// entries, vector fails a stated precondition).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested outside the function's domain (at a declared
/// singularity, at an excluded point).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Linear system too ill-conditioned to solve reliably.
class SingularSystemError : public Error {
 public:
  SingularSystemError(const std::string& what, double rcond)
      : Error(what), rcond_(rcond) {}
  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

/// Contour placement invalid: a singularity or eigenvalue sits inside or
/// on a circle that must exclude it.
class ContourError : public Error {
 public:
  using Error::Error;
};

/// Circle fails to separate enclosed from excluded eigenvalues.
class SeparationError : public Error {
 public:
  using Error::Error;
};

/// Quadrature failed to converge, or a trace failed to round to an integer.
class AccuracyError : public Error {
 public:
  explicit AccuracyError(const std::string& what, double residual = 0.0)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// howland_step called at a point where A(z0) is invertible.
class NoZeroError : public Error {
 public:
  using Error::Error;
};

/// Factorization did not terminate within max_steps.
class NotFiniteTypeError : public Error {
 public:
  using Error::Error;
};

/// Identically vanishing determinant (m = infinity case).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Pole order exceeds the probe depth.
class OrderExceedsProbeError : public Error {
 public:
  using Error::Error;
};

/// I - K(z) singular at a resolvent-set point of H0: the Birman-Schwinger
/// detector fired, i.e. z is an eigenvalue of the perturbed operator.
class BirmanSchwingerSingularity : public Error {
 public:
  BirmanSchwingerSingularity(const std::string& what, std::complex<double> z)
      : Error(what), z_(z) {}
  std::complex<double> point() const { return z_; }

 private:
  std::complex<double> z_;
};

}  // namespace opfactor
