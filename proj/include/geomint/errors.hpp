#pragma once

#include <stdexcept>
#include <string>

namespace geomint {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments: wrong lengths, parameters out of range, points outside a map's domain.
class RejectedInput : public Error {
 public:
  using Error::Error;
};

class DomainViolation : public RejectedInput {
 public:
  using RejectedInput::RejectedInput;
};

// Anything that fails while computing: Newton, singular matrices, inverses.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public NumericalFailure {
 public:
  ConvergenceFailure(const std::string& what, double residual, int iterations)
      : NumericalFailure(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

class NoInverse : public NumericalFailure {
 public:
  NoInverse(const std::string& what, double residual)
      : NumericalFailure(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class SingularMatrix : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class DerivativeOrderError : public Error {
 public:
  DerivativeOrderError() : Error("derivative nesting depth exceeded") {}
};

}  // namespace geomint
