// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "turbomor/common.hpp"
#include "turbomor/linalg/cholesky.hpp"

namespace turbomor {

/// Contribution of an eliminated interior block to the outer block.
struct SchurUpdate {
  DenseMatrix delta_g11;  // -G21^T W
  DenseMatrix delta_c11;  // -C21^T W - W^T C21'
  DenseMatrix c21;        // C21' = C21 - C22 W
};

/// W = G22^{-1} G21 with G22 = K K^T, then the updates above. Both deltas are
/// returned exactly symmetric.
SchurUpdate schur_update(const SparseMatrix& g21, const SparseMatrix& c21, const SparseMatrix& c22,
                         const CholeskyFactor& k);

struct SchurCongruence {
  DenseMatrix g11;
  DenseMatrix c11;
  DenseMatrix c21;
};

/// Congruence of the 2x2 partitioned pencil that decouples the resistive
/// interior: G11' = G11 - G21^T W, C11' = C11 - C21^T W - W^T C21',
/// C21' = C21 - C22 W.
SchurCongruence schur_congruence(const SparseMatrix& g11, const SparseMatrix& g21,
                                 const SparseMatrix& c11, const SparseMatrix& c21,
                                 const SparseMatrix& c22, const CholeskyFactor& k);

/// (A + A^T) / 2.
DenseMatrix symmetrized(const DenseMatrix& a);

}  // namespace turbomor
