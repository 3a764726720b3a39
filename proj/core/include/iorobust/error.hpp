#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace iorobust {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller handed in something malformed: wrong dimensions, non-finite data, bad flags.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Input data violates a modelling assumption (e.g. an observation is not primal feasible).
class DataError : public Error {
 public:
  DataError(const std::string& what, std::ptrdiff_t row = -1) : Error(what), row_(row) {}
  // 0-based offending row, or -1 when the violation is not tied to a row.
  std::ptrdiff_t row() const { return row_; }

 private:
  std::ptrdiff_t row_;
};

// The uncertainty set (or the inverse-feasible region) has no points.
class EmptyUncertaintyError : public Error {
 public:
  using Error::Error;
};

// {x : Ax = b, x >= 0} is empty for the requested right-hand side.
class InfeasibleForwardError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double final_gap) : Error(what), final_gap_(final_gap) {}
  double final_gap() const { return final_gap_; }

 private:
  double final_gap_;
};

// A sub-solve returned a status that the surrounding theory rules out.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace iorobust
