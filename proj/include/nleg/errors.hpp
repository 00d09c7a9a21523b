#pragma once

#include <stdexcept>
#include <string>

namespace nleg {

/// Base class for all domain errors thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct SingularMatrix : Error {
  using Error::Error;
};

struct NotSymmetric : Error {
  using Error::Error;
};

struct UnknownAlgebra : Error {
  using Error::Error;
};

struct JacobiViolation : Error {
  using Error::Error;
};

struct NotSemisimple : Error {
  using Error::Error;
};

struct DegenerateFrame : Error {
  using Error::Error;
};

struct SeriesNonConvergent : Error {
  using Error::Error;
};

struct CriticalRho : Error {
  using Error::Error;
};

struct SingularMetric : Error {
  using Error::Error;
};

struct DegenerateLagrangeTensor : Error {
  using Error::Error;
};

struct MissingField : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace nleg
