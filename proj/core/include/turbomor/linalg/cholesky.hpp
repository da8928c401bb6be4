// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "turbomor/common.hpp"
#include "turbomor/linalg/sparse_sym.hpp"

namespace turbomor {

enum class Ordering { natural, fill_reducing };

struct CholeskyOptions {
  Ordering ordering = Ordering::fill_reducing;
  /// A pivot d fails when d <= pivot_tolerance * max|a_ii|.
  double pivot_tolerance = 1e-12;
};

/// Sparse factor P A P^T = K K^T. Immutable once built.
class CholeskyFactor {
 public:
  CholeskyFactor() = default;

  Index order() const { return k_.rows(); }
  /// Lower-triangular K, diagonal stored first in each column.
  const SparseMatrix& factor() const { return k_; }
  /// permutation()[i] is the original index eliminated at step i.
  const std::vector<Index>& permutation() const { return perm_; }
  /// nnz(K) minus nnz(lower(A)).
  Index fill_in() const { return fill_in_; }

  /// A^{-1} rhs.
  DenseMatrix solve(const DenseMatrix& rhs) const;
  DenseVector solve(const DenseVector& rhs) const;
  /// K^{-1} P rhs (whitening).
  DenseMatrix forward(const DenseMatrix& rhs) const;
  /// P^T K^{-T} rhs.
  DenseMatrix backward(const DenseMatrix& rhs) const;

 private:
  friend CholeskyFactor cholesky(const SparseSymMatrix&, const CholeskyOptions&);

  using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  void lower_solve_in_place(RowMajorMatrix& x) const;
  void upper_solve_in_place(RowMajorMatrix& x) const;
  void lower_solve_in_place(double* x) const;
  void upper_solve_in_place(double* x) const;

  SparseMatrix k_;
  std::vector<Index> perm_;
  Index fill_in_ = 0;
};

/// Left-looking simplicial Cholesky. Throws NotPositiveDefinite with the
/// failing pivot in A's original numbering.
CholeskyFactor cholesky(const SparseSymMatrix& a, const CholeskyOptions& options = {});

/// Elimination order for `a` (full symmetric storage). Natural ordering is
/// the identity; fill_reducing uses approximate minimum degree.
std::vector<Index> elimination_order(const SparseMatrix& full, Ordering ordering);

}  // namespace turbomor
