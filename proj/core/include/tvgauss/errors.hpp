#pragma once

#include <stdexcept>
#include <string>

namespace tvgauss {

/// Base class for all tvgauss errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector/matrix shapes are incompatible.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A covariance matrix failed symmetry or positive-semidefiniteness checks.
class NotPositiveSemidefinite : public Error {
 public:
  using Error::Error;
};

/// A matrix required to be positive definite is singular at the working tolerance.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// No eigenvalue of a covariance clears the rank threshold.
class ZeroCovariance : public Error {
 public:
  using Error::Error;
};

/// Two covariances required to share a range do not.
class RangeMismatch : public Error {
 public:
  using Error::Error;
};

/// A one-dimensional Gaussian has nonpositive variance.
class ZeroVariance : public Error {
 public:
  using Error::Error;
};

/// A direction vector has zero norm.
class ZeroVector : public Error {
 public:
  using Error::Error;
};

/// The two Gaussians do not share an affine support.
class SupportMismatch : public Error {
 public:
  using Error::Error;
};

/// The means coincide; the different-mean bound does not apply.
class SameMean : public Error {
 public:
  using Error::Error;
};

/// The pair is one-dimensional; the multivariate bound does not apply.
class OneDimensional : public Error {
 public:
  using Error::Error;
};

/// An ensemble or job specification is invalid.
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

}  // namespace tvgauss
