// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "turbomor/common.hpp"
#include "turbomor/ingest/descriptor.hpp"
#include "turbomor/linalg/cholesky.hpp"

namespace turbomor {

/// Tolerances and knobs shared by the reducers.
struct ReductionOptions {
  /// Relative Cholesky pivot threshold.
  double pivot_tolerance = 1e-12;
  /// Accepted relative asymmetry of G and C on input.
  double symmetry_tolerance = 1e-12;
  /// Maximum promoted rows as a fraction of the internal node count.
  double promotion_limit = 0.25;
  /// PRIMA deflation threshold relative to a column's initial norm.
  double deflation_tolerance = 1e-10;
  Ordering ordering = Ordering::fill_reducing;
  Index panel_width = 64;
};

enum class BlockKind { outer, iteration, separator };

struct BlockInfo {
  Index offset = 0;
  Index width = 0;
  BlockKind kind = BlockKind::outer;
  int iteration = 1;   // 1 for outer blocks
  int partition = -1;  // -1 when not partitioned or for separators
};

/// Reduced pencil (Ghat, Chat, Bhat) with its block layout.
struct ReducedModel {
  std::string method;
  int q = 0;
  Index p = 0;
  Index p_eff = 0;
  SparseMatrix g;
  SparseMatrix c;
  SparseMatrix b;
  std::vector<BlockInfo> blocks;
  std::vector<std::string> labels;
  std::vector<std::string> promoted;
  bool dense = false;
  bool truncated = false;

  Index order() const { return g.rows(); }
  DescriptorSystem as_system() const;
};

struct IterationStats {
  int iteration = 0;
  Index width = 0;
  Index interior = 0;
  Index fill_in = 0;
  double seconds = 0.0;
};

struct ReductionReport {
  int moments_matched = 0;
  Index promoted_row_count = 0;
  std::vector<std::string> promoted;
  std::vector<IterationStats> iterations;
  std::map<std::string, double> timings;
  bool truncated = false;
  Index partitions = 1;
  Index pass_through = 0;
  Index deflated_columns = 0;
  std::vector<std::string> notes;
};

const char* to_string(BlockKind kind);
BlockKind block_kind_from_string(const std::string& name);

}  // namespace turbomor
