#pragma once

#include <stdexcept>
#include <string>

namespace clab {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// "validation" for bad input, "numerical" for failures during computation.
  virtual const char* category() const noexcept = 0;
  virtual const char* kind() const noexcept = 0;
};

/// Input that violates a documented precondition.
class ValidationFailure : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "validation"; }
};

/// A computation that started on valid input but could not finish.
class NumericalFailure : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "numerical"; }
};

#define CLAB_DEFINE_ERROR(Name, Base, Kind)                       \
  class Name : public Base {                                      \
   public:                                                        \
    using Base::Base;                                             \
    const char* kind() const noexcept override { return Kind; }   \
  };

CLAB_DEFINE_ERROR(DimensionError, ValidationFailure, "dimension")
CLAB_DEFINE_ERROR(DomainError, ValidationFailure, "domain")
CLAB_DEFINE_ERROR(ParameterError, ValidationFailure, "parameter")
CLAB_DEFINE_ERROR(HypothesisError, ValidationFailure, "hypothesis")
CLAB_DEFINE_ERROR(ConfigError, ValidationFailure, "config")
CLAB_DEFINE_ERROR(SingularityError, NumericalFailure, "singularity")
CLAB_DEFINE_ERROR(GeometryError, NumericalFailure, "geometry")
CLAB_DEFINE_ERROR(ConstructionError, NumericalFailure, "construction")
CLAB_DEFINE_ERROR(IntegrandError, NumericalFailure, "integrand")
CLAB_DEFINE_ERROR(TraceError, NumericalFailure, "trace")
CLAB_DEFINE_ERROR(DegenerateError, NumericalFailure, "degenerate")
CLAB_DEFINE_ERROR(SolverError, NumericalFailure, "solver")
CLAB_DEFINE_ERROR(IoError, NumericalFailure, "io")

#undef CLAB_DEFINE_ERROR

}  // namespace clab
