#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyperdisp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain (negative radius, NaN, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Valid request this implementation does not provide (e.g. Bessel order 2).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Argument outside the range where a given approximation is valid.
class RangeError : public Error {
 public:
  using Error::Error;
};

class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double residual)
      : Error(what + " (achieved residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// A grid does not resolve the oscillation it has to integrate.
class ResolutionError : public Error {
 public:
  ResolutionError(const std::string& what, double achieved, double required)
      : Error(what + " (" + std::to_string(achieved) + " nodes per period, need " +
              std::to_string(required) + ")"),
        achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

class ConsistencyError : public Error {
 public:
  ConsistencyError(const std::string& what, double mismatch)
      : Error(what + " (mismatch " + std::to_string(mismatch) + ")"), mismatch_(mismatch) {}
  double mismatch() const noexcept { return mismatch_; }

 private:
  double mismatch_;
};

class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double tail)
      : Error(what + " (tail estimate " + std::to_string(tail) + ")"), tail_(tail) {}
  double tail() const noexcept { return tail_; }

 private:
  double tail_;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace hyperdisp
