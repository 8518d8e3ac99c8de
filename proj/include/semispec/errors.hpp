#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace semispec {

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the operation's domain (t < 0, Re(z) <= 0, z = 0, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

// A stated precondition was violated (guards like |b| >= beta).
class PreconditionError : public Error {
public:
  using Error::Error;
};

// Resolvent requested at (or too close to) a spectral point.
class PoleError : public Error {
public:
  PoleError(const std::string& what, std::complex<double> z,
            std::complex<double> nearest)
      : Error(what), z(z), nearest_eigenvalue(nearest) {}
  std::complex<double> z;
  std::complex<double> nearest_eigenvalue;
};

// (eta Id - R(z)) singular: the meromorphic extension hits a pole.
class ExtensionPoleError : public Error {
public:
  using Error::Error;
};

class SeriesDivergenceError : public Error {
public:
  using Error::Error;
};

// Projector circle encloses more than one distinct eigenvalue.
class ContourOverlapError : public Error {
public:
  using Error::Error;
};

class ContourThroughPoleError : public Error {
public:
  using Error::Error;
};

class LedgerUndefinedError : public Error {
public:
  LedgerUndefinedError(const std::string& what, std::string formula)
      : Error(what), formula(std::move(formula)) {}
  std::string formula;
};

class InsufficientRegularityError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace semispec
