#pragma once

#include <stdexcept>
#include <string>

namespace levycollapse {

// Base type for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ---- spectral / state construction ----
class NonHermitianInput : public Error {
public:
  using Error::Error;
};
class EmptySpectrum : public Error {
public:
  using Error::Error;
};
class DimensionMismatch : public Error {
public:
  using Error::Error;
};
class IndexOutOfRange : public Error {
public:
  using Error::Error;
};
class ZeroProbabilityBranch : public Error {
public:
  using Error::Error;
};
class InvalidState : public Error {
public:
  using Error::Error;
};

// ---- noise models ----
class OutsideExponentDomain : public Error {
public:
  using Error::Error;
};
class QuadratureFailure : public Error {
public:
  using Error::Error;
};
class NonpositiveTimestep : public Error {
public:
  using Error::Error;
};
class ZeroKappa : public Error {
public:
  using Error::Error;
};
class InvalidLevyMeasure : public Error {
public:
  using Error::Error;
};

// ---- signals and paths ----
class BadGrid : public Error {
public:
  using Error::Error;
};
class WrongNoiseKind : public Error {
public:
  using Error::Error;
};

// ---- filtering / integration ----
class AllWeightsZero : public Error {
public:
  using Error::Error;
};
class DegenerateNormalization : public Error {
public:
  using Error::Error;
};
class StepUnstable : public Error {
public:
  using Error::Error;
};

// ---- analytics ----
class NonpositiveInput : public Error {
public:
  using Error::Error;
};

// ---- configuration ----
class ConfigInvalid : public Error {
public:
  using Error::Error;
};

}  // namespace levycollapse
