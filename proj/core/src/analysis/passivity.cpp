// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include "turbomor/analysis/passivity.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "turbomor/linalg/cholesky.hpp"

namespace turbomor {

MatrixCheck check_matrix(const SparseMatrix& a, const PassivityOptions& options) {
  if (a.rows() != a.cols()) throw DimensionMismatch("passivity check: matrix is not square");
  MatrixCheck out;
  double max_abs = 0.0;
  for (Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) max_abs = std::max(max_abs, std::abs(it.value()));
  out.asymmetry = max_asymmetry(a);
  out.symmetric = out.asymmetry <= options.symmetry_tolerance * max_abs;
  const Index n = a.rows();
  if (n == 0) {
    out.nonnegative = true;
    out.method = "eigen";
    return out;
  }

  if (n <= options.eigen_limit) {
    out.method = "eigen";
    const DenseMatrix dense(a);
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(0.5 * (dense + dense.transpose()));
    if (eig.info() != Eigen::Success) return out;
    const DenseVector& lambda = eig.eigenvalues();
    out.norm = lambda.cwiseAbs().maxCoeff();
    out.min_value = lambda[0];
    out.nonnegative = lambda[0] >= -options.tolerance * out.norm;
    if (!out.nonnegative) {
      out.witness = eig.eigenvectors().col(0);
      out.witness.cwiseAbs().maxCoeff(&out.witness_index);
    }
    return out;
  }

  out.method = "cholesky";
  // Infinity norm bounds the spectral norm of a symmetric matrix.
  DenseVector row_sums = DenseVector::Zero(n);
  for (Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) row_sums[it.row()] += std::abs(it.value());
  out.norm = row_sums.maxCoeff();
  SparseMatrix shifted = a;
  SparseMatrix identity(n, n);
  identity.setIdentity();
  shifted += (options.tolerance * out.norm) * identity;
  SparseMatrix t = shifted.transpose();
  SparseMatrix sym = 0.5 * (shifted + t);
  CholeskyOptions copt;
  copt.pivot_tolerance = 0.0;
  try {
    cholesky(SparseSymMatrix::from_full(sym, std::numeric_limits<double>::infinity()), copt);
    out.nonnegative = true;
  } catch (const NotPositiveDefinite& e) {
    out.nonnegative = false;
    out.min_value = e.pivot_value();
    out.witness_index = e.pivot_index();
    out.witness = DenseVector::Unit(n, e.pivot_index());
  }
  return out;
}

PassivityReport passivity_check(const SparseMatrix& g, const SparseMatrix& c, const PassivityOptions& options) {
  PassivityReport out;
  out.g = check_matrix(g, options);
  out.c = check_matrix(c, options);
  out.passed = out.g.symmetric && out.g.nonnegative && out.c.symmetric && out.c.nonnegative;
  return out;
}

PassivityReport passivity_check(const DescriptorSystem& sys, const PassivityOptions& options) {
  return passivity_check(sys.g, sys.c, options);
}

PassivityReport passivity_check(const ReducedModel& rom, const PassivityOptions& options) {
  return passivity_check(rom.g, rom.c, options);
}

}  // namespace turbomor
