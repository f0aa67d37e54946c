#ifndef RDL_ERROR_HPP_
#define RDL_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rdl {

// Base class for every error raised by the library. Callers that only care
// about "something went wrong in rdl" can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation that needs derivatives of order two (or a link function) was
// invoked on a loss that does not have them, e.g. the hinge loss.
class UnsupportedLossError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Conditioning or sampling from a measure with no mass.
class EmptyMassError : public Error {
 public:
  using Error::Error;
};

// Oracle invoked above its supported problem size.
class ScaleError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : what + " (line " + std::to_string(line) + ")"),
        line_(line) {}

  // 1-based line number, 0 when the error is not tied to a line.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// An iterative method stopped before reaching its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : Error(what + " (best residual " + std::to_string(best_residual) + ")"),
        best_residual_(best_residual) {}

  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

}  // namespace rdl

#endif  // RDL_ERROR_HPP_
