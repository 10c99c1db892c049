#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace vibim {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Errors caused by malformed or inconsistent input data. The CLI maps
/// these to exit code 3.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Errors raised when a computation cannot proceed numerically. The CLI
/// maps these to exit code 4.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class UnknownLevelError : public DataError {
 public:
  UnknownLevelError(std::size_t row, const std::string& name)
      : DataError("unknown level in row " + std::to_string(row) +
                  " of predictor '" + name + "'") {}
};

class NonFiniteValueError : public DataError {
 public:
  NonFiniteValueError(std::size_t row, const std::string& name)
      : DataError("non-finite value in row " + std::to_string(row) +
                  " of predictor '" + name + "'") {}
};

class SelfPairError : public DataError {
 public:
  explicit SelfPairError(int i)
      : DataError("interaction pair {" + std::to_string(i) + "," +
                  std::to_string(i) + "} pairs a group with itself") {}
};

class AllConstantDesignError : public NumericalError {
 public:
  AllConstantDesignError()
      : NumericalError("design has no group with any variation") {}
};

class EmptyDesignError : public DataError {
 public:
  EmptyDesignError() : DataError("design has no predictor groups") {}
};

class MissingColumnError : public DataError {
 public:
  explicit MissingColumnError(const std::string& name)
      : DataError("column '" + name + "' not found in dataset") {}
};

class UnparsableCellError : public DataError {
 public:
  UnparsableCellError(std::size_t row, const std::string& col)
      : DataError("cell at row " + std::to_string(row) + ", column '" + col +
                  "' could not be parsed") {}
};

}  // namespace vibim
