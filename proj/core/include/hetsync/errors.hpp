#pragma once

#include <stdexcept>
#include <string>

namespace hetsync {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (bad shapes, disconnected graph, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown that makes a result meaningless rather than merely
/// inaccurate. The CLI maps this family to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Two unperturbed eigenvalues coupled by the perturbation are closer than the
/// gap floor, so the nondegenerate second-order expansion is not valid.
class DegenerateGap : public NumericalError {
 public:
  DegenerateGap(int block_a, int index_a, int block_b, int index_b, double gap,
                const std::string& context = {});

  int block_a() const { return block_a_; }
  int index_a() const { return index_a_; }
  int block_b() const { return block_b_; }
  int index_b() const { return index_b_; }
  double gap() const { return gap_; }

 private:
  int block_a_;
  int index_a_;
  int block_b_;
  int index_b_;
  double gap_;
};

/// A block of the unperturbed stability matrix has no usable eigenbasis.
class NotDiagonalizable : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace hetsync
