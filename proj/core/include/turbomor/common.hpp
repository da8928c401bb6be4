// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace turbomor {

using Index = Eigen::Index;
using DenseMatrix = Eigen::MatrixXd;
using DenseVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, Index>;
using Triplet = Eigen::Triplet<double, Index>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: bad netlists, bundles, dimensions.
class InputError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InputError {
 public:
  using InputError::InputError;
};

/// Parse failure with a 1-based source location.
class ParseError : public InputError {
 public:
  ParseError(std::string source, int line, int column, const std::string& message);

  const std::string& source() const { return source_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string source_;
  int line_;
  int column_;
};

/// Failures of the numerical kernels (breakdown, singularity).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Raised by the Cholesky factorization when a pivot falls below the
/// configured threshold. `pivot_index` is in the caller's numbering.
class NotPositiveDefinite : public NumericalError {
 public:
  NotPositiveDefinite(Index pivot_index, double pivot_value);

  Index pivot_index() const { return pivot_index_; }
  double pivot_value() const { return pivot_value_; }

 private:
  Index pivot_index_;
  double pivot_value_;
};

class SingularMatrix : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PromotionOverflow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Copies `src` into a compressed sparse matrix with explicit zeros removed.
SparseMatrix pruned(const SparseMatrix& src);

/// Largest |A_ij - A_ji| over the stored entries.
double max_asymmetry(const SparseMatrix& a);

/// A(rows, cols) with the given index lists (any order, no duplicates).
SparseMatrix submatrix(const SparseMatrix& a, const std::vector<Index>& rows,
                       const std::vector<Index>& cols);

}  // namespace turbomor
