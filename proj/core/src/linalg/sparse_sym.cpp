// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include "turbomor/linalg/sparse_sym.hpp"

#include <cmath>

namespace turbomor {

SparseSymMatrix SparseSymMatrix::from_full(const SparseMatrix& full, double tolerance) {
  if (full.rows() != full.cols()) throw DimensionMismatch("symmetric matrix must be square");
  double scale = 0.0;
  for (Index k = 0; k < full.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(full, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
  if (max_asymmetry(full) > tolerance * scale) throw InputError("matrix is not symmetric");
  SparseSymMatrix out;
  out.lower_ = full.triangularView<Eigen::Lower>();
  out.lower_ = pruned(out.lower_);
  return out;
}

SparseSymMatrix SparseSymMatrix::from_lower(const SparseMatrix& lower) {
  if (lower.rows() != lower.cols()) throw DimensionMismatch("symmetric matrix must be square");
  for (Index k = 0; k < lower.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(lower, k); it; ++it)
      if (it.row() < it.col() && it.value() != 0.0)
        throw InputError("from_lower: entry above the diagonal");
  SparseSymMatrix out;
  out.lower_ = pruned(lower);
  return out;
}

SparseMatrix SparseSymMatrix::full() const {
  SparseMatrix out = lower_.selfadjointView<Eigen::Lower>();
  out.makeCompressed();
  return out;
}

double SparseSymMatrix::max_abs_diagonal() const {
  double d = 0.0;
  for (Index k = 0; k < lower_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(lower_, k); it; ++it)
      if (it.row() == k) d = std::max(d, std::abs(it.value()));
  return d;
}

}  // namespace turbomor
