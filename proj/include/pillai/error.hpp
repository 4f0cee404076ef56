#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace pillai {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failures: singular systems, degenerate inputs, broken identities.

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A Cholesky pivot fell below the relative tolerance.
class NotPositiveDefinite : public NumericalError {
 public:
  explicit NotPositiveDefinite(std::size_t pivot)
      : NumericalError("matrix is not positive definite (pivot " +
                       std::to_string(pivot) + ")"),
        pivot_(pivot) {}

  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

/// The design (1, Y) or the centered Y is singular. `column()` is the
/// zero-based Y column at which the factorization broke down, when known.
class RankDeficient : public NumericalError {
 public:
  explicit RankDeficient(std::optional<std::size_t> column,
                         const std::string& what)
      : NumericalError(what), column_(column) {}

  std::optional<std::size_t> column() const noexcept { return column_; }

 private:
  std::optional<std::size_t> column_;
};

/// The predictor x (or a simple-regression predictor) is constant.
class DegenerateX : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// R^2 = 1: the F statistic is infinite.
class DegenerateFit : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A value that must hold by construction does not (e.g. beta outside [0, 1]).
class ConsistencyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Data and validation failures.

class DataError : public Error {
 public:
  using Error::Error;
};

class NonFiniteValue : public DataError {
 public:
  using DataError::DataError;
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t line, std::string column, const std::string& detail)
      : DataError("parse error at line " + std::to_string(line) +
                  ", column '" + column + "': " + detail),
        line_(line),
        column_(std::move(column)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::string column_;
};

class MissingColumn : public DataError {
 public:
  explicit MissingColumn(std::string name)
      : DataError("no such column: '" + name + "'"), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class EmptySelection : public DataError {
 public:
  using DataError::DataError;
};

/// The x column was also requested as a Y column.
class ColumnConflict : public DataError {
 public:
  using DataError::DataError;
};

class TooFewRows : public DataError {
 public:
  TooFewRows(std::size_t n, std::size_t k)
      : DataError("need at least k + 2 = " + std::to_string(k + 2) +
                  " rows for k = " + std::to_string(k) + ", got " +
                  std::to_string(n)),
        n_(n),
        k_(k) {}

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }

 private:
  std::size_t n_;
  std::size_t k_;
};

}  // namespace pillai
