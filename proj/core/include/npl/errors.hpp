#pragma once

#include <stdexcept>
#include <string>

namespace npl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A series or iteration did not reach its target accuracy.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// No sign change of J_nu was found around the k-th zero estimate.
class BracketError : public Error {
 public:
  BracketError(double nu, int k, const std::string& what)
      : Error(what), nu_(nu), k_(k) {}

  double nu() const noexcept { return nu_; }
  int k() const noexcept { return k_; }

 private:
  double nu_;
  int k_;
};

/// The parity of a temporal index is incompatible with the sign of alpha.
class ParityError : public Error {
 public:
  using Error::Error;
};

/// The iterative linear solver failed to reach its residual target.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, long iterations, double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}

  long iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  long iterations_;
  double residual_;
};

}  // namespace npl
