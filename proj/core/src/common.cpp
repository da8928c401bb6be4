// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include "turbomor/common.hpp"

#include <algorithm>
#include <cmath>

namespace turbomor {

ParseError::ParseError(std::string source, int line, int column, const std::string& message)
    : InputError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                 message),
      source_(std::move(source)),
      line_(line),
      column_(column) {}

NotPositiveDefinite::NotPositiveDefinite(Index pivot_index, double pivot_value)
    : NumericalError("matrix is not positive definite: pivot " + std::to_string(pivot_index) +
                     " has value " + std::to_string(pivot_value)),
      pivot_index_(pivot_index),
      pivot_value_(pivot_value) {}

SparseMatrix pruned(const SparseMatrix& src) {
  SparseMatrix out = src;
  out.prune(0.0, 0.0);
  out.makeCompressed();
  return out;
}

double max_asymmetry(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("max_asymmetry: matrix is not square");
  SparseMatrix t = a.transpose();
  SparseMatrix d = a - t;
  double worst = 0.0;
  for (Index k = 0; k < d.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(d, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

SparseMatrix submatrix(const SparseMatrix& a, const std::vector<Index>& rows,
                       const std::vector<Index>& cols) {
  std::vector<Index> where(static_cast<std::size_t>(a.rows()), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) where[static_cast<std::size_t>(rows[i])] = static_cast<Index>(i);
  std::vector<Triplet> trips;
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (SparseMatrix::InnerIterator it(a, cols[j]); it; ++it) {
      const Index r = where[static_cast<std::size_t>(it.row())];
      if (r >= 0) trips.emplace_back(r, static_cast<Index>(j), it.value());
    }
  SparseMatrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

}  // namespace turbomor
