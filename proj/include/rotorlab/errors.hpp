#pragma once

#include <stdexcept>
#include <string>

namespace rotorlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coordinate outside the manifold chart, or on a singular endpoint.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Metric cannot be inverted (h = 0, i.e. at a pole of the chart).
class SingularMetric : public Error {
 public:
  using Error::Error;
};

/// A point on the lower sheet of the two-sheeted hyperboloid.
class HemisphereError : public Error {
 public:
  using Error::Error;
};

class GridTooCoarse : public Error {
 public:
  using Error::Error;
};

class IncompatibleLayout : public Error {
 public:
  using Error::Error;
};

class NonFiniteCoefficient : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

class NoAllowedRegion : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace rotorlab
