// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include "turbomor/partition/partitioned_reduce.hpp"

#include <algorithm>
#include <chrono>

namespace turbomor {

ReductionLayout partition_layout(const DescriptorSystem& sys, const PartitionTree& tree) {
  const Index m = sys.order();
  std::vector<Index> port_of(static_cast<std::size_t>(m), -1);
  for (Index j = 0; j < sys.b.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(sys.b, j); it; ++it)
      if (it.value() != 0.0) port_of[static_cast<std::size_t>(it.row())] = j;

  ReductionLayout layout;
  layout.partitioned = true;
  layout.separators = tree.separators();
  int id = 0;
  for (const auto& nodes : tree.leaves()) {
    LeafSpec leaf;
    leaf.partition = id++;
    std::vector<std::pair<Index, Index>> ports;
    for (Index v : nodes) {
      const Index port = port_of[static_cast<std::size_t>(v)];
      if (port >= 0)
        ports.emplace_back(port, v);
      else
        leaf.interior.push_back(v);
    }
    std::sort(ports.begin(), ports.end());
    for (const auto& pv : ports) leaf.owned_outer.push_back(pv.second);
    layout.leaves.push_back(std::move(leaf));
  }
  return layout;
}

std::pair<ReducedModel, ReductionReport> reduce_partitioned(const DescriptorSystem& sys, int q,
                                                            const PartitionTree& tree,
                                                            const ReductionOptions& options) {
  if (q < 1) throw InputError("q must be at least 1");
  validate_partition(tree, adjacency_pattern(sys));
  return reduce_with_layout(sys, q, partition_layout(sys, tree), options);
}

std::pair<ReducedModel, ReductionReport> reduce_partitioned(const DescriptorSystem& sys, int q,
                                                            Index leaf_size,
                                                            const ReductionOptions& options) {
  if (q < 1) throw InputError("q must be at least 1");
  const auto t0 = std::chrono::steady_clock::now();
  PartitionTree tree = nested_dissection(sys, leaf_size);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto result = reduce_partitioned(sys, q, tree, options);
  result.second.timings["partition"] = seconds;
  result.second.timings["total"] += seconds;
  return result;
}

}  // namespace turbomor
