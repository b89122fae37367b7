#pragma once

#include <stdexcept>
#include <string>

namespace wassci {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Instance validation failed (dimensions, covariance symmetry / PSD).
class InvalidInstance : public Error {
  using Error::Error;
};

// CSV parsing failed; carries the 1-based line and column of the offence.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class DimensionMismatch : public Error {
  using Error::Error;
};

class SingularMatrix : public Error {
  using Error::Error;
};

// Basis columns of the constraint matrix are linearly dependent.
class SingularBasis : public SingularMatrix {
  using SingularMatrix::SingularMatrix;
};

class NumericalFailure : public Error {
  using Error::Error;
};

// Transportation problems are always feasible; raised only on internal bugs.
class Infeasible : public Error {
  using Error::Error;
};

// Optimal basis has a basic variable at (numerical) zero.
class DegenerateSolution : public Error {
 public:
  DegenerateSolution(const std::string& what, int variable_one_based,
                     double value)
      : Error(what), variable_(variable_one_based), value_(value) {}
  int variable() const { return variable_; }  // 1-based cost index
  double value() const { return value_; }

 private:
  int variable_;
  double value_;
};

// eta lies in the null space of the covariance.
class DegenerateDirection : public Error {
  using Error::Error;
};

// Truncation region does not contain the observed statistic.
class EmptyRegion : public Error {
  using Error::Error;
};

class NumericalUnderflow : public Error {
  using Error::Error;
};

class RootNotBracketed : public Error {
  using Error::Error;
};

class DomainError : public Error {
  using Error::Error;
};

}  // namespace wassci
