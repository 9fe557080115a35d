#pragma once

#include <stdexcept>
#include <string>

namespace reset_lab {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Matrix shapes that do not fit together.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// Out-of-range or otherwise invalid argument.
class ArgumentError : public Error {
  public:
    using Error::Error;
};

/// An iterative routine failed (eigenvalue non-convergence, event localization).
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// No reset within the search horizon.
class NotFoundError : public Error {
  public:
    using Error::Error;
};

/// A map left its domain (state landed in the reset subspace, or left an invariant set).
class DegenerateError : public Error {
  public:
    using Error::Error;
};

}  // namespace reset_lab
