// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "turbomor/common.hpp"

namespace turbomor {

/// Symmetric matrix stored as its lower triangle in compressed sparse column
/// form, sorted row indices, no explicit zeros.
class SparseSymMatrix {
 public:
  SparseSymMatrix() = default;

  /// Takes the lower triangle of `full`. Throws InputError if `full` is not
  /// square or deviates from symmetry by more than `tolerance * max|a_ij|`.
  static SparseSymMatrix from_full(const SparseMatrix& full, double tolerance = 0.0);
  /// Takes `lower` as-is; entries above the diagonal are rejected.
  static SparseSymMatrix from_lower(const SparseMatrix& lower);

  Index order() const { return lower_.rows(); }
  Index nonzeros() const { return lower_.nonZeros(); }
  const SparseMatrix& lower() const { return lower_; }
  SparseMatrix full() const;
  double max_abs_diagonal() const;

 private:
  SparseMatrix lower_;
};

}  // namespace turbomor
