#pragma once

#include <stdexcept>
#include <string>

namespace mgflow {

// Base class for everything thrown by this library. The CLI maps the
// subclasses onto distinct process exit codes, so errors should be raised
// through one of the categories below rather than this base.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid constants or malformed problem definitions (bad EOS parameters,
// unknown names, unreadable configuration files).
struct ConfigError : Error {
  using Error::Error;
};

// A thermodynamic state outside the usable range of its EOS: nonpositive
// density, density outside the convexity interval, or a wave-curve solve
// that would have to leave that interval.
struct EosDomainError : Error {
  using Error::Error;
};

// Sound-speed radicand went nonpositive: the state lost hyperbolicity.
struct HyperbolicityError : EosDomainError {
  using EosDomainError::EosDomainError;
};

// The two initial states separate faster than the rarefactions can fill:
// no positive-pressure solution exists.
struct VacuumError : Error {
  VacuumError(const std::string& msg, double margin_)
      : Error(msg), margin(margin_) {}
  double margin;  // m/s, <= 0 when vacuum forms
};

// An iteration exhausted its budget without meeting tolerance.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& msg, int iterations_, double residual_)
      : Error(msg), iterations(iterations_), residual(residual_) {}
  int iterations;
  double residual;
};

// A time step broke a scheme constraint: interface jumped more than one
// cell, positivity lost, or the interface left the domain.
struct StepError : Error {
  using Error::Error;
};

}  // namespace mgflow
