// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include "turbomor/prima/prima.hpp"

#include <chrono>

#include "turbomor/linalg/cholesky.hpp"

namespace turbomor {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Q^T A Q for symmetric sparse A, lower triangle by column chunks, mirrored.
DenseMatrix project(const SparseMatrix& a, const DenseMatrix& q) {
  const Index n = q.cols();
  DenseMatrix out = DenseMatrix::Zero(n, n);
  constexpr Index chunk = 256;
  for (Index j0 = 0; j0 < n; j0 += chunk) {
    const Index w = std::min(chunk, n - j0);
    DenseMatrix y = a * q.middleCols(j0, w);
    out.block(j0, j0, n - j0, w).noalias() = q.rightCols(n - j0).transpose() * y;
  }
  out.triangularView<Eigen::StrictlyUpper>() = out.transpose();
  return out;
}

}  // namespace

KrylovBasis block_arnoldi(const DescriptorSystem& sys, int q, const ReductionOptions& options) {
  if (q < 1) throw InputError("q must be at least 1");
  validate(sys, options.symmetry_tolerance);
  const Index m = sys.order();
  const Index p = sys.port_count();

  CholeskyOptions copt;
  copt.ordering = options.ordering;
  copt.pivot_tolerance = options.pivot_tolerance;
  const CholeskyFactor k = cholesky(SparseSymMatrix::from_full(sys.g, options.symmetry_tolerance), copt);

  KrylovBasis basis;
  basis.q = DenseMatrix(m, std::min<Index>(static_cast<Index>(q) * p, m));
  basis.block_offsets.push_back(0);
  Index cols = 0;

  DenseMatrix x = k.solve(DenseMatrix(sys.b));
  for (int blk = 0; blk < q; ++blk) {
    if (blk > 0) {
      const Index prev = basis.block_offsets[static_cast<std::size_t>(blk - 1)];
      DenseMatrix cq = sys.c * basis.q.middleCols(prev, cols - prev);
      x = -k.solve(cq);
    }
    const DenseVector initial = x.colwise().norm();

    // Block modified Gram-Schmidt against earlier blocks, two passes.
    for (int pass = 0; pass < 2; ++pass)
      for (Index b = 0; b < blk; ++b) {
        const Index off = basis.block_offsets[static_cast<std::size_t>(b)];
        const Index w = basis.block_offsets[static_cast<std::size_t>(b) + 1] - off;
        if (w == 0) continue;
        auto qb = basis.q.middleCols(off, w);
        DenseMatrix h = qb.transpose() * x;
        x.noalias() -= qb * h;
      }

    // Modified Gram-Schmidt inside the block: each accepted column is removed
    // from all later columns at once, and each candidate is reorthogonalized
    // against the accepted columns of the block before the deflation test.
    const Index start = cols;
    for (Index c = 0; c < x.cols(); ++c) {
      if (cols >= basis.q.cols()) {
        basis.deflated += x.cols() - c;
        break;
      }
      DenseVector v = x.col(c);
      if (cols > start) {
        auto accepted = basis.q.middleCols(start, cols - start);
        DenseVector h = accepted.transpose() * v;
        v.noalias() -= accepted * h;
      }
      const double norm = v.norm();
      if (initial[c] == 0.0 || norm < options.deflation_tolerance * initial[c]) {
        ++basis.deflated;
        continue;
      }
      basis.q.col(cols) = v / norm;
      const Index rest = x.cols() - c - 1;
      if (rest > 0) {
        auto qc = basis.q.col(cols);
        Eigen::RowVectorXd h = qc.transpose() * x.rightCols(rest);
        x.rightCols(rest).noalias() -= qc * h;
      }
      ++cols;
    }
    basis.block_offsets.push_back(cols);
    if (cols == start) break;
  }
  // Blocks never generated after an empty one count as deflated.
  basis.deflated = static_cast<Index>(q) * p - cols;
  basis.q.conservativeResize(m, cols);
  return basis;
}

std::pair<ReducedModel, ReductionReport> prima_reduce(const DescriptorSystem& sys, int q,
                                                      const ReductionOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  KrylovBasis basis = block_arnoldi(sys, q, options);
  const double t_arnoldi = seconds_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  ReducedModel rom;
  rom.method = "prima";
  rom.q = q;
  rom.p = sys.port_count();
  rom.p_eff = rom.p;
  rom.dense = true;
  rom.g = DenseMatrix(project(sys.g, basis.q)).sparseView(0.0, 0.0);
  rom.c = DenseMatrix(project(sys.c, basis.q)).sparseView(0.0, 0.0);
  rom.b = DenseMatrix(basis.q.transpose() * sys.b).sparseView(0.0, 0.0);
  const double t_project = seconds_since(t1);

  ReductionReport report;
  report.moments_matched = 2 * q;
  report.deflated_columns = basis.deflated;
  report.truncated = basis.deflated > 0;
  rom.truncated = report.truncated;
  for (Index b = 0; b < basis.block_count(); ++b) {
    const Index off = basis.block_offsets[static_cast<std::size_t>(b)];
    const Index w = basis.block_offsets[static_cast<std::size_t>(b) + 1] - off;
    rom.blocks.push_back({off, w, BlockKind::iteration, static_cast<int>(b) + 1, -1});
    IterationStats s;
    s.iteration = static_cast<int>(b) + 1;
    s.width = w;
    s.interior = sys.order();
    report.iterations.push_back(s);
  }
  for (Index i = 0; i < rom.order(); ++i) rom.labels.push_back("k" + std::to_string(i + 1));
  if (basis.deflated > 0)
    report.notes.push_back(std::to_string(basis.deflated) + " Krylov columns deflated");
  report.timings["arnoldi"] = t_arnoldi;
  report.timings["projection"] = t_project;
  report.timings["total"] = seconds_since(t0);
  return {std::move(rom), std::move(report)};
}

}  // namespace turbomor
