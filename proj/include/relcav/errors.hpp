#pragma once

#include <stdexcept>
#include <string>

namespace relcav {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid physical input (bad geometry, mode index, out-of-range point).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Requested operation is outside the supported physics (e.g. massive Rindler modes).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to reach its declared accuracy.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class QuadratureError : public NumericError {
 public:
  using NumericError::NumericError;
};

class UnitarityError : public NumericError {
 public:
  using NumericError::NumericError;
};

class SymplecticityError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ExtractionError : public NumericError {
 public:
  using NumericError::NumericError;
};

class EigenSolverError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// The closed-form resonance expression was requested away from resonance.
class OffResonanceError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed or unreadable coefficient cache file.
class CacheError : public Error {
 public:
  using Error::Error;
};

}  // namespace relcav
