#pragma once

#include <stdexcept>
#include <string>

namespace tangentia {

// Base for every error raised by the library. Degenerate-configuration
// errors carry their own type so the CLI can map them to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IsotropicDirection : public Error {
 public:
  using Error::Error;
};

class SingularBasis : public Error {
 public:
  using Error::Error;
};

class AffinelyDependentCenters : public Error {
 public:
  using Error::Error;
};

class DiscriminantVanishes : public Error {
 public:
  using Error::Error;
};

class DegenerateRadius : public Error {
 public:
  using Error::Error;
};

class ZeroCoordinateRoot : public Error {
 public:
  using Error::Error;
};

class UnresolvedCluster : public Error {
 public:
  using Error::Error;
};

class NonFiniteSolutionSet : public Error {
 public:
  using Error::Error;
};

}  // namespace tangentia
