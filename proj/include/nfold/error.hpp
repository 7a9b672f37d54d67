#pragma once

#include <stdexcept>
#include <string>

namespace nfold {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated (bad dimension, out-of-domain argument).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A numerical condition failed: matrix not positive definite, rank deficiency,
/// eigensolver did not converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed or incomplete configuration / input file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace nfold
