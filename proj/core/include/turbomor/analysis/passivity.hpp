// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "turbomor/ingest/descriptor.hpp"
#include "turbomor/reduce/model.hpp"

namespace turbomor {

struct MatrixCheck {
  bool symmetric = false;
  bool nonnegative = false;
  double asymmetry = 0.0;
  double norm = 0.0;
  /// Smallest eigenvalue (eigen method) or the failing pivot (Cholesky method).
  double min_value = 0.0;
  std::string method;  // "eigen" or "cholesky"
  /// Eigenvector of the smallest eigenvalue, or the unit vector at the
  /// failing pivot. Empty on success with the Cholesky method.
  DenseVector witness;
  Index witness_index = -1;
};

struct PassivityReport {
  bool passed = false;
  MatrixCheck g;
  MatrixCheck c;
};

struct PassivityOptions {
  double tolerance = 1e-10;
  double symmetry_tolerance = 1e-12;
  Index eigen_limit = 5000;
};

/// Symmetry and non-negative definiteness of one matrix. Orders up to
/// `eigen_limit` use the smallest eigenvalue (>= -tol * ||A||); larger ones
/// attempt a Cholesky factorization of A + tol * ||A|| I.
MatrixCheck check_matrix(const SparseMatrix& a, const PassivityOptions& options = {});

PassivityReport passivity_check(const SparseMatrix& g, const SparseMatrix& c,
                                const PassivityOptions& options = {});
PassivityReport passivity_check(const DescriptorSystem& sys, const PassivityOptions& options = {});
PassivityReport passivity_check(const ReducedModel& rom, const PassivityOptions& options = {});

}  // namespace turbomor
