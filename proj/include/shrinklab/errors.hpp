#pragma once
#include <stdexcept>
#include <string>

namespace shrinklab {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Jacobian of a chart map lost rank at an evaluation point.
struct DegenerateImmersion : Error {
  using Error::Error;
};

struct InvalidParameter : Error {
  using Error::Error;
};

// A derivative oracle was asked for an order it cannot supply.
struct OracleOrderUnavailable : Error {
  using Error::Error;
};

// Hard form of the shrinker gate (classification refuses non-shrinkers).
struct NotAShrinker : Error {
  using Error::Error;
};

struct ZeroMeanCurvature : Error {
  using Error::Error;
};

// Unweighted integrals are defined only for compact targets.
struct NonCompactUnweightedIntegral : Error {
  using Error::Error;
};

struct StepTooLarge : Error {
  using Error::Error;
};

struct NoClosure : Error {
  using Error::Error;
};

struct UnknownTarget : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct InvalidSpec : Error {
  using Error::Error;
};

}  // namespace shrinklab
