// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include "turbomor/linalg/schur.hpp"

namespace turbomor {

DenseMatrix symmetrized(const DenseMatrix& a) {
  DenseMatrix out = 0.5 * (a + a.transpose());
  return out;
}

SchurUpdate schur_update(const SparseMatrix& g21, const SparseMatrix& c21, const SparseMatrix& c22,
                         const CholeskyFactor& k) {
  const Index n = k.order();
  if (g21.rows() != n || c21.rows() != n || c22.rows() != n || c22.cols() != n)
    throw DimensionMismatch("schur_update: interior dimension mismatch");
  if (g21.cols() != c21.cols()) throw DimensionMismatch("schur_update: outer dimension mismatch");

  SchurUpdate out;
  const DenseMatrix w = k.solve(DenseMatrix(g21));
  out.delta_g11 = symmetrized(-(g21.transpose() * w));
  out.c21 = DenseMatrix(c21) - c22 * w;
  DenseMatrix c = -(c21.transpose() * w);
  c.noalias() -= w.transpose() * out.c21;
  out.delta_c11 = symmetrized(c);
  return out;
}

SchurCongruence schur_congruence(const SparseMatrix& g11, const SparseMatrix& g21,
                                 const SparseMatrix& c11, const SparseMatrix& c21,
                                 const SparseMatrix& c22, const CholeskyFactor& k) {
  if (g11.rows() != g21.cols() || c11.rows() != c21.cols() || g11.rows() != c11.rows())
    throw DimensionMismatch("schur_congruence: outer dimension mismatch");
  SchurUpdate u = schur_update(g21, c21, c22, k);
  SchurCongruence out;
  out.g11 = symmetrized(DenseMatrix(g11)) + u.delta_g11;
  out.c11 = symmetrized(DenseMatrix(c11)) + u.delta_c11;
  out.c21 = std::move(u.c21);
  return out;
}

}  // namespace turbomor
