// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "turbomor/ingest/descriptor.hpp"
#include "turbomor/reduce/model.hpp"

namespace turbomor {

/// Orthonormal basis of the block Krylov space K_q(-G^{-1}C, G^{-1}B).
struct KrylovBasis {
  DenseMatrix q;
  /// Block k spans columns [block_offsets[k], block_offsets[k+1]).
  std::vector<Index> block_offsets;
  Index deflated = 0;

  Index block_count() const { return static_cast<Index>(block_offsets.size()) - 1; }
};

/// Block Arnoldi with block modified Gram-Schmidt against earlier blocks,
/// column modified Gram-Schmidt inside a block, one reorthogonalization pass
/// and relative deflation. Throws NotPositiveDefinite if G cannot be factored.
KrylovBasis block_arnoldi(const DescriptorSystem& sys, int q, const ReductionOptions& options = {});

/// Congruence projection onto the block Krylov basis. The model is dense.
std::pair<ReducedModel, ReductionReport> prima_reduce(const DescriptorSystem& sys, int q,
                                                      const ReductionOptions& options = {});

}  // namespace turbomor
