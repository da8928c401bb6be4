// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>

#include "turbomor/partition/nested_dissection.hpp"
#include "turbomor/reduce/turbomor.hpp"

namespace turbomor {

/// Bordered block diagonal layout from a partition tree: each leaf keeps its
/// port nodes as outer rows, separators form the border.
ReductionLayout partition_layout(const DescriptorSystem& sys, const PartitionTree& tree);

/// Partitioned TurboMOR. Leaves are reduced independently with their ports
/// plus adjacent separator nodes as inputs; separator blocks accumulate the
/// Schur updates of every adjacent leaf.
std::pair<ReducedModel, ReductionReport> reduce_partitioned(const DescriptorSystem& sys, int q,
                                                            Index leaf_size,
                                                            const ReductionOptions& options = {});

std::pair<ReducedModel, ReductionReport> reduce_partitioned(const DescriptorSystem& sys, int q,
                                                            const PartitionTree& tree,
                                                            const ReductionOptions& options = {});

}  // namespace turbomor
