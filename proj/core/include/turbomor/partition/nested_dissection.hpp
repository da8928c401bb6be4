// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "turbomor/common.hpp"
#include "turbomor/ingest/descriptor.hpp"

namespace turbomor {

struct PartitionNode {
  std::vector<Index> separator;  // interior nodes of the tree only
  std::vector<Index> leaf;       // leaves only
  std::vector<int> children;

  bool is_leaf() const { return children.empty(); }
};

/// Recursive dissection of the node set. Leaves and separators together
/// cover every node exactly once.
struct PartitionTree {
  std::vector<PartitionNode> nodes;
  int root = -1;
  Index order = 0;
  Index leaf_size_target = 0;

  /// Leaf node sets in depth-first order.
  std::vector<std::vector<Index>> leaves() const;
  /// Separator nodes, deepest separators first and the root separator last.
  std::vector<Index> separators() const;
};

/// Symmetric adjacency pattern of G + C without the diagonal.
SparseMatrix adjacency_pattern(const DescriptorSystem& sys);

PartitionTree nested_dissection(const DescriptorSystem& sys, Index leaf_size);
PartitionTree nested_dissection(const SparseMatrix& adjacency, Index leaf_size);

/// Throws InputError unless leaves and separators partition all nodes and no
/// edge joins two different leaves.
void validate_partition(const PartitionTree& tree, const SparseMatrix& adjacency);

/// Builds a flat tree from a permutation listing: whitespace-separated node
/// names, `|` closes a leaf, and every name after a `sep:` token is a
/// separator node.
PartitionTree partition_from_permutation(const std::string& text,
                                         const std::vector<std::string>& node_labels);
PartitionTree read_permutation_file(const std::string& path,
                                    const std::vector<std::string>& node_labels);

/// Inverse of partition_from_permutation.
std::string format_permutation(const PartitionTree& tree, const std::vector<std::string>& node_labels);

}  // namespace turbomor
