// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "turbomor/common.hpp"
#include "turbomor/ingest/netlist.hpp"

namespace turbomor {

/// The grounded MNA description (G + sC) x = B u, y = B^T x of an RC
/// network. In canonical form the first `port_count()` rows are the port
/// nodes in port order and B is the leading identity columns.
struct DescriptorSystem {
  SparseMatrix g;  // conductance, symmetric, siemens
  SparseMatrix c;  // capacitance, symmetric, farad
  SparseMatrix b;  // m x p port selector
  std::vector<std::string> node_labels;  // internal index -> original node name

  Index order() const { return g.rows(); }
  Index port_count() const { return b.cols(); }
};

/// Checks the structural invariants (square symmetric G and C of equal
/// order, B a unit selector with distinct rows). Throws InputError.
void validate(const DescriptorSystem& sys, double symmetry_tolerance = 0.0);

/// True when B is [I_p; 0].
bool is_canonical(const DescriptorSystem& sys);

/// Reorders nodes so port rows come first (in B column order) followed by
/// the remaining nodes in their current relative order.
DescriptorSystem canonicalize(const DescriptorSystem& sys);

/// Standard MNA stamps; ground rows are dropped and nodes are ordered ports
/// first, then internal nodes by first appearance. Warnings (e.g. all-zero
/// rows of G + C) are appended to `warnings` when given.
DescriptorSystem stamp(const Netlist& net, std::vector<std::string>* warnings = nullptr);

/// Inverse of stamp: off-diagonal entries become elements between node
/// pairs and row-sum residues become elements to ground. B must be a
/// selector. Zero entries produce no element.
Netlist unstamp(const SparseMatrix& g, const SparseMatrix& c, const SparseMatrix& b,
                const std::vector<std::string>& node_labels);

/// Returns P A P^T restricted/reordered to `order` (order[k] = old index of new k).
SparseMatrix permute_symmetric(const SparseMatrix& a, const std::vector<Index>& order);

/// Rows of a (sparse) matrix reordered so that new row k = old row order[k].
SparseMatrix permute_rows(const SparseMatrix& a, const std::vector<Index>& order);

}  // namespace turbomor
