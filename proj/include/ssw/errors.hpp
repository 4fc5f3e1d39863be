#pragma once

#include <stdexcept>
#include <string>

namespace ssw {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical / model errors
struct NotPositiveDefinite : Error {
  using Error::Error;
};
struct InvalidDof : Error {
  using Error::Error;
};
struct InvalidParameter : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct ZeroWatermark : Error {
  using Error::Error;
};
struct DegenerateData : Error {
  using Error::Error;
};
struct NonFiniteElbo : Error {
  using Error::Error;
};

// File / format errors
struct IoError : Error {
  using Error::Error;
};
struct MalformedHeader : IoError {
  using IoError::IoError;
};
struct UnsupportedMaxval : IoError {
  using IoError::IoError;
};
struct TruncatedData : IoError {
  using IoError::IoError;
};
struct IndivisibleDimensions : Error {
  using Error::Error;
};
struct LayoutMismatch : Error {
  using Error::Error;
};

}  // namespace ssw
