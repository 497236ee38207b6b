#pragma once

#include <stdexcept>
#include <string>

namespace necrosim {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Result not representable in the requested floating-point type.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// R1 == R2 (or numerically indistinguishable).
class DegenerateAnnulus : public Error {
 public:
  using Error::Error;
};

/// Invalid user-supplied parameters or configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Caller violated an API contract (mismatched sizes, grids, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// An interface perturbation reached the admissibility bound.
class InterfaceCollision : public Error {
 public:
  InterfaceCollision(const std::string& what, int interface_index, double sup_norm, double bound)
      : Error(what), interface_index_(interface_index), sup_norm_(sup_norm), bound_(bound) {}

  int interface_index() const noexcept { return interface_index_; }
  double sup_norm() const noexcept { return sup_norm_; }
  double bound() const noexcept { return bound_; }

 private:
  int interface_index_;
  double sup_norm_;
  double bound_;
};

/// 1 + rho <= 0 somewhere: the interface passes through the origin.
class DegenerateInterface : public Error {
 public:
  using Error::Error;
};

/// Iterative linear solve did not reach its tolerance.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, double residual, int iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Non-finite values appeared during time stepping.
class NumericalBlowup : public Error {
 public:
  using Error::Error;
};

}  // namespace necrosim
