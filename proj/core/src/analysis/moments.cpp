// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include "turbomor/analysis/moments.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "turbomor/linalg/cholesky.hpp"

namespace turbomor {

namespace {

MomentSet moments_null_space(const SparseMatrix& g_sparse, const SparseMatrix& c_sparse,
                             const DenseMatrix& b, int count) {
  const DenseMatrix g = DenseMatrix(g_sparse);
  const DenseMatrix c = DenseMatrix(c_sparse);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(0.5 * (g + g.transpose()));
  if (eig.info() != Eigen::Success) throw SingularMatrix("moments: eigendecomposition of G failed");
  const DenseVector& lambda = eig.eigenvalues();
  const double scale = lambda.cwiseAbs().maxCoeff();
  const double cut = 1e-11 * std::max(scale, std::numeric_limits<double>::min()) * static_cast<double>(g.rows());
  std::vector<Index> null_cols;
  for (Index i = 0; i < lambda.size(); ++i)
    if (std::abs(lambda[i]) <= cut) null_cols.push_back(i);

  DenseMatrix n(g.rows(), static_cast<Index>(null_cols.size()));
  for (std::size_t k = 0; k < null_cols.size(); ++k) n.col(static_cast<Index>(k)) = eig.eigenvectors().col(null_cols[k]);

  const double bnorm = std::max(b.norm(), std::numeric_limits<double>::min());
  if (n.cols() > 0 && (n.transpose() * b).norm() > 1e-9 * bnorm)
    throw SingularMatrix("moments: a port lies in the null space of G (pole at s = 0)");

  const DenseMatrix shifted = g + std::max(scale, 1.0) * n * n.transpose();
  Eigen::PartialPivLU<DenseMatrix> solver(shifted);
  if (!(solver.rcond() > 1e-15)) throw SingularMatrix("moments: G is singular beyond its null space");

  Eigen::PartialPivLU<DenseMatrix> nullc;
  DenseMatrix ntc;
  if (n.cols() > 0) {
    ntc = n.transpose() * c;
    nullc.compute(ntc * n);
    if (!(nullc.rcond() > 1e-13))
      throw SingularMatrix("moments: G + sC is singular near s = 0 (C vanishes on the null space of G)");
  }

  MomentSet out;
  DenseMatrix rhs = b;
  for (int k = 0; k < count; ++k) {
    DenseMatrix x = solver.solve(rhs);
    if (n.cols() > 0) x -= n * nullc.solve(ntc * x);
    out.m.push_back(b.transpose() * x);
    rhs = -(c * x);
  }
  return out;
}

double norm_or_zero(const DenseMatrix& a) { return a.size() ? a.norm() : 0.0; }

}  // namespace

MomentSet moments_direct(const SparseMatrix& g, const SparseMatrix& c, const DenseMatrix& b, int count,
                         Index dense_limit) {
  if (count < 1) throw InputError("moment count must be at least 1");
  if (g.rows() != g.cols() || c.rows() != g.rows() || c.cols() != g.rows() || b.rows() != g.rows())
    throw DimensionMismatch("moments_direct: inconsistent dimensions");

  CholeskyFactor k;
  try {
    k = cholesky(SparseSymMatrix::from_full(g, std::numeric_limits<double>::infinity()));
  } catch (const NotPositiveDefinite&) {
    if (g.rows() > dense_limit)
      throw SingularMatrix("moments: G is singular and the order exceeds the dense limit");
    return moments_null_space(g, c, b, count);
  }
  MomentSet out;
  DenseMatrix x = k.solve(b);
  for (int i = 0; i < count; ++i) {
    out.m.push_back(b.transpose() * x);
    if (i + 1 < count) {
      DenseMatrix cx = c * x;
      x = -k.solve(cx);
    }
  }
  return out;
}

MomentSet moments_direct(const DescriptorSystem& sys, int count) {
  return moments_direct(sys.g, sys.c, DenseMatrix(sys.b), count);
}

MomentSet moments_direct(const ReducedModel& rom, int count) {
  return moments_direct(rom.g, rom.c, DenseMatrix(rom.b), count);
}

MomentSet moments_recursive(const DenseMatrix& b1, const DenseMatrix& g11, const DenseMatrix& c11,
                            const MomentSet& inner, int count) {
  if (count < 1) throw InputError("moment count must be at least 1");
  const Index pe = g11.rows();
  if (g11.cols() != pe || c11.rows() != pe || c11.cols() != pe || b1.rows() != pe)
    throw DimensionMismatch("moments_recursive: inconsistent outer dimensions");
  if (inner.count() < count - 2)
    throw InputError("moments_recursive: need " + std::to_string(count - 2) + " inner moments, got " +
                     std::to_string(inner.count()));
  for (const DenseMatrix& n : inner.m)
    if (n.rows() != pe || n.cols() != pe) throw DimensionMismatch("moments_recursive: inner moment size");

  Eigen::PartialPivLU<DenseMatrix> lu(g11);
  if (pe > 0 && !(lu.rcond() > 1e-14)) throw SingularMatrix("moments_recursive: G11 is singular");

  std::vector<DenseMatrix> x;
  MomentSet out;
  for (int r = 0; r < count; ++r) {
    DenseMatrix rhs;
    if (r == 0) {
      rhs = b1;
    } else {
      rhs = -(c11 * x[static_cast<std::size_t>(r - 1)]);
      for (int l = 0; l <= r - 2; ++l) rhs += inner[l] * x[static_cast<std::size_t>(r - l - 2)];
    }
    x.push_back(lu.solve(rhs));
    out.m.push_back(b1.transpose() * x.back());
  }
  return out;
}

MomentSet inner_moments(const InnerState& inner, int count) {
  MomentSet out;
  if (count <= 0) return out;
  if (inner.whitened) throw InputError("inner_moments: state is already whitened");
  const DenseMatrix& c21 = inner.coupling;
  if (c21.rows() == 0) {
    for (int l = 0; l < count; ++l) out.m.push_back(DenseMatrix::Zero(c21.cols(), c21.cols()));
    return out;
  }
  DenseMatrix y = inner.k->solve(c21);
  for (int l = 0; l < count; ++l) {
    out.m.push_back(c21.transpose() * y);
    if (l + 1 < count) {
      DenseMatrix cy = inner.c22 * y;
      y = -inner.k->solve(cy);
    }
  }
  return out;
}

std::vector<double> moment_errors(const MomentSet& reference, const MomentSet& candidate) {
  const Index n = std::min(reference.count(), candidate.count());
  std::vector<double> out;
  const double m0 = reference.count() > 0 ? norm_or_zero(reference[0]) : 0.0;
  const double m1 = reference.count() > 1 ? norm_or_zero(reference[1]) : 0.0;
  const double rho = m0 > 0.0 ? m1 / m0 : 0.0;
  for (Index k = 0; k < n; ++k) {
    if (reference[k].rows() != candidate[k].rows() || reference[k].cols() != candidate[k].cols())
      throw DimensionMismatch("moment sizes differ");
    const double diff = norm_or_zero(reference[k] - candidate[k]);
    const double floor = 1e-14 * m0 * std::pow(rho, static_cast<double>(k));
    const double denom = std::max(norm_or_zero(reference[k]), floor);
    out.push_back(denom > 0.0 ? diff / denom : diff);
  }
  return out;
}

double moment_error(const MomentSet& reference, const MomentSet& candidate) {
  double worst = 0.0;
  for (double e : moment_errors(reference, candidate)) worst = std::max(worst, e);
  return worst;
}

}  // namespace turbomor
