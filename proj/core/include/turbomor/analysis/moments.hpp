// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "turbomor/ingest/descriptor.hpp"
#include "turbomor/reduce/model.hpp"
#include "turbomor/reduce/turbomor.hpp"

namespace turbomor {

/// Moments M_0 .. M_{K-1} of H(s) = B^T (G + sC)^{-1} B at s = 0.
struct MomentSet {
  std::vector<DenseMatrix> m;

  Index count() const { return static_cast<Index>(m.size()); }
  const DenseMatrix& operator[](Index k) const { return m[static_cast<std::size_t>(k)]; }
};

/// M_k = B^T (-G^{-1} C)^k G^{-1} B by repeated sparse solves. If G is
/// singular but H(s) is analytic at 0 (no port in the null space of G and
/// N^T C N nonsingular), a dense null-space recursion is used for orders up
/// to `dense_limit`; otherwise SingularMatrix is thrown.
MomentSet moments_direct(const SparseMatrix& g, const SparseMatrix& c, const DenseMatrix& b, int count,
                         Index dense_limit = 2000);
MomentSet moments_direct(const DescriptorSystem& sys, int count);
MomentSet moments_direct(const ReducedModel& rom, int count);

/// Moments of the port block from its reduced matrices and the moments N_l of
/// the eliminated interior (N_0 .. N_{count-3}):
///   X_0 = G11^{-1} B1, X_1 = -G11^{-1} C11 X_0,
///   X_r = -G11^{-1} C11 X_{r-1} + G11^{-1} sum_{l=0}^{r-2} N_l X_{r-l-2},
///   M_r = B1^T X_r.
/// Throws SingularMatrix if G11 is singular.
MomentSet moments_recursive(const DenseMatrix& b1, const DenseMatrix& g11, const DenseMatrix& c11,
                            const MomentSet& inner, int count);

/// N_l = C21'^T (-G22^{-1} C22)^l G22^{-1} C21' for the interior left by
/// reduce_iteration1 (state must not be whitened yet).
MomentSet inner_moments(const InnerState& inner, int count);

/// Largest relative Frobenius error over k of `candidate[k]` against
/// `reference[k]`. Moments that vanish in the reference are compared on
/// the scale ||M_0|| rho^k with rho = ||M_1|| / ||M_0||.
double moment_error(const MomentSet& reference, const MomentSet& candidate);
std::vector<double> moment_errors(const MomentSet& reference, const MomentSet& candidate);

}  // namespace turbomor
