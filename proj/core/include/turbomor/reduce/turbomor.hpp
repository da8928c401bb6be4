// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "turbomor/linalg/householder.hpp"
#include "turbomor/reduce/model.hpp"

namespace turbomor {

/// The port block after the resistive interior has been eliminated.
struct OuterSystem {
  DenseMatrix g11;
  DenseMatrix c11;
  DenseMatrix b1;
  std::vector<Index> rows;  // original indices of the outer rows
};

/// Interior subsystem with G = I in whitened coordinates. Its capacitance is
/// only reachable through the factored operator `apply_interior`.
struct InnerState {
  std::shared_ptr<const CholeskyFactor> k;
  SparseMatrix c22;
  std::vector<HouseholderFactor> q;  // Q^(2) .. Q^(j-1)
  /// Coupling of the remaining interior to the last extracted block. Before
  /// iteration 2 this is C21' in original interior coordinates.
  DenseMatrix coupling;
  bool whitened = false;
  int next_iteration = 2;

  Index interior_order() const { return coupling.rows(); }
};

struct Iteration1Result {
  OuterSystem outer;
  InnerState inner;
  std::vector<Index> promoted;  // original indices, in promotion order
  Index fill_in = 0;
};

/// Resistive decoupling. Interior rows whose Cholesky pivot fails are promoted
/// into the port block one at a time. `sys` must be canonical.
Iteration1Result reduce_iteration1(const DescriptorSystem& sys, const ReductionOptions& options = {});

struct IterationStep {
  DenseMatrix c11;  // C11^(j)
  DenseMatrix r;    // R^(j), upper trapezoidal, width_j x width_{j-1}
  InnerState next;
  bool truncated = false;
};

/// One Householder iteration. With `final` set only C11^(j) is formed and
/// the returned state is exhausted.
IterationStep reduce_iteration_j(InnerState state, Index panel_width = 64, bool final = false);

/// C22^(j-1) Y for the current interior, through K, C22 and every stored Q.
DenseMatrix apply_interior(const InnerState& state, DenseMatrix y);

/// Full TurboMOR reduction to q iterations.
std::pair<ReducedModel, ReductionReport> turbomor_reduce(const DescriptorSystem& sys, int q,
                                                         const ReductionOptions& options = {});

/// One region of the interior reduced independently. `owned_outer` rows stay
/// unreduced and are placed ahead of the leaf's iteration blocks.
struct LeafSpec {
  std::vector<Index> owned_outer;
  std::vector<Index> interior;
  int partition = -1;
};

/// Bordered block diagonal layout. Leaves couple to each other only through
/// `separators`, which are placed last in the reduced model.
struct ReductionLayout {
  std::vector<LeafSpec> leaves;
  std::vector<Index> separators;
  /// Leaf blocks couple only to outer rows adjacent to the leaf interior, and
  /// leaves with at least as many such rows as interior nodes pass through.
  bool partitioned = false;
};

/// General driver behind turbomor_reduce and reduce_partitioned.
std::pair<ReducedModel, ReductionReport> reduce_with_layout(const DescriptorSystem& sys, int q,
                                                            const ReductionLayout& layout,
                                                            const ReductionOptions& options = {});

}  // namespace turbomor
