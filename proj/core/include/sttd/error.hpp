#pragma once

#include <stdexcept>
#include <string>

namespace sttd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor shapes that must agree do not.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// An inverse FFT was asked to drop an imaginary part that is not round-off.
/// Seeing this means an upstream step broke conjugate symmetry.
class SymmetryViolation : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Fewer frames than one temporal group needs.
class SequenceTooShort : public Error {
 public:
  using Error::Error;
};

/// A synthetic target cannot reach the requested SCR with peak amplitude <= 1.
class Infeasible : public Error {
 public:
  using Error::Error;
};

/// File system or decoding failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sttd
