// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include "turbomor/linalg/cholesky.hpp"

#include <Eigen/OrderingMethods>
#include <cmath>

#include "turbomor/ingest/descriptor.hpp"

namespace turbomor {

std::vector<Index> elimination_order(const SparseMatrix& full, Ordering ordering) {
  const Index n = full.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  if (ordering == Ordering::natural || n <= 2) {
    for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    return order;
  }
  Eigen::SparseMatrix<double, Eigen::ColMajor, int> pattern = full.cast<double>();
  pattern.makeCompressed();
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> pinv;
  Eigen::AMDOrdering<int> amd;
  amd(pattern, pinv);
  // pinv maps new position -> original index.
  for (Index k = 0; k < n; ++k) order[static_cast<std::size_t>(k)] = pinv.indices()[k];
  return order;
}

CholeskyFactor cholesky(const SparseSymMatrix& a, const CholeskyOptions& options) {
  const Index n = a.order();
  CholeskyFactor f;
  f.perm_ = elimination_order(a.full(), options.ordering);

  SparseMatrix permuted = permute_symmetric(a.full(), f.perm_);
  SparseMatrix lower = permuted.triangularView<Eigen::Lower>();
  lower.makeCompressed();
  SparseMatrix upper = lower.transpose();  // column k: rows i < k of row k of the lower part
  upper.makeCompressed();

  const auto un = static_cast<std::size_t>(n);

  // Elimination tree (Liu) with path compression.
  std::vector<Index> parent(un, -1), ancestor(un, -1);
  for (Index k = 0; k < n; ++k) {
    for (SparseMatrix::InnerIterator it(upper, k); it; ++it) {
      Index i = it.row();
      while (i != -1 && i < k) {
        Index next = ancestor[static_cast<std::size_t>(i)];
        ancestor[static_cast<std::size_t>(i)] = k;
        if (next == -1) {
          parent[static_cast<std::size_t>(i)] = k;
          break;
        }
        i = next;
      }
    }
  }

  // Column counts by row subtrees, then column patterns in row order.
  std::vector<Index> mark(un, -1), count(un, 1);
  auto walk_row_subtree = [&](Index k, auto&& visit) {
    mark[static_cast<std::size_t>(k)] = k;
    for (SparseMatrix::InnerIterator it(upper, k); it; ++it) {
      Index i = it.row();
      if (i >= k) continue;
      while (mark[static_cast<std::size_t>(i)] != k) {
        visit(i);
        mark[static_cast<std::size_t>(i)] = k;
        i = parent[static_cast<std::size_t>(i)];
      }
    }
  };
  for (Index k = 0; k < n; ++k) walk_row_subtree(k, [&](Index i) { ++count[static_cast<std::size_t>(i)]; });

  std::vector<Index> col_ptr(un + 1, 0);
  for (Index j = 0; j < n; ++j) col_ptr[static_cast<std::size_t>(j) + 1] = col_ptr[static_cast<std::size_t>(j)] + count[static_cast<std::size_t>(j)];
  const Index nnz = col_ptr[un];
  std::vector<Index> row_idx(static_cast<std::size_t>(nnz));
  std::vector<double> values(static_cast<std::size_t>(nnz), 0.0);
  std::vector<Index> fill(un);
  for (Index j = 0; j < n; ++j) {
    row_idx[static_cast<std::size_t>(col_ptr[static_cast<std::size_t>(j)])] = j;
    fill[static_cast<std::size_t>(j)] = col_ptr[static_cast<std::size_t>(j)] + 1;
  }
  std::fill(mark.begin(), mark.end(), -1);
  for (Index k = 0; k < n; ++k)
    walk_row_subtree(k, [&](Index i) { row_idx[static_cast<std::size_t>(fill[static_cast<std::size_t>(i)]++)] = k; });

  // Numeric left-looking factorization. `head[j]` lists the columns whose next
  // unprocessed entry lies in row j; `cursor[k]` is that entry's position.
  const double threshold = options.pivot_tolerance * a.max_abs_diagonal();
  std::vector<Index> head(un, -1), link(un, -1), cursor(un, 0);
  std::vector<double> x(un, 0.0);
  const Index* lp = lower.outerIndexPtr();
  const Index* li = lower.innerIndexPtr();
  const double* lv = lower.valuePtr();

  for (Index j = 0; j < n; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    for (Index p = lp[j]; p < lp[j + 1]; ++p) x[static_cast<std::size_t>(li[p])] = lv[p];

    Index k = head[uj];
    while (k != -1) {
      const auto uk = static_cast<std::size_t>(k);
      Index next_k = link[uk];
      Index pos = cursor[uk];
      const double ljk = values[static_cast<std::size_t>(pos)];
      const Index end = col_ptr[uk + 1];
      for (Index p = pos; p < end; ++p)
        x[static_cast<std::size_t>(row_idx[static_cast<std::size_t>(p)])] -= values[static_cast<std::size_t>(p)] * ljk;
      cursor[uk] = pos + 1;
      if (pos + 1 < end) {
        Index r = row_idx[static_cast<std::size_t>(pos + 1)];
        link[uk] = head[static_cast<std::size_t>(r)];
        head[static_cast<std::size_t>(r)] = k;
      }
      k = next_k;
    }

    const double d = x[uj];
    if (!(d > threshold) || !std::isfinite(d)) throw NotPositiveDefinite(f.perm_[uj], d);
    const double ljj = std::sqrt(d);
    const Index begin = col_ptr[uj];
    const Index end = col_ptr[uj + 1];
    values[static_cast<std::size_t>(begin)] = ljj;
    x[uj] = 0.0;
    for (Index p = begin + 1; p < end; ++p) {
      auto r = static_cast<std::size_t>(row_idx[static_cast<std::size_t>(p)]);
      values[static_cast<std::size_t>(p)] = x[r] / ljj;
      x[r] = 0.0;
    }
    if (begin + 1 < end) {
      cursor[uj] = begin + 1;
      Index r = row_idx[static_cast<std::size_t>(begin + 1)];
      link[uj] = head[static_cast<std::size_t>(r)];
      head[static_cast<std::size_t>(r)] = j;
    }
  }

  f.k_.resize(n, n);
  f.k_.resizeNonZeros(nnz);
  std::copy(col_ptr.begin(), col_ptr.end(), f.k_.outerIndexPtr());
  std::copy(row_idx.begin(), row_idx.end(), f.k_.innerIndexPtr());
  std::copy(values.begin(), values.end(), f.k_.valuePtr());
  f.fill_in_ = nnz - lower.nonZeros();
  return f;
}

void CholeskyFactor::lower_solve_in_place(RowMajorMatrix& x) const {
  const Index n = order();
  const Index* cp = k_.outerIndexPtr();
  const Index* ri = k_.innerIndexPtr();
  const double* v = k_.valuePtr();
  for (Index j = 0; j < n; ++j) {
    x.row(j) /= v[cp[j]];
    auto xj = x.row(j);
    for (Index p = cp[j] + 1; p < cp[j + 1]; ++p) x.row(ri[p]) -= v[p] * xj;
  }
}

void CholeskyFactor::upper_solve_in_place(RowMajorMatrix& x) const {
  const Index n = order();
  const Index* cp = k_.outerIndexPtr();
  const Index* ri = k_.innerIndexPtr();
  const double* v = k_.valuePtr();
  for (Index j = n - 1; j >= 0; --j) {
    auto xj = x.row(j);
    for (Index p = cp[j] + 1; p < cp[j + 1]; ++p) xj -= v[p] * x.row(ri[p]);
    xj /= v[cp[j]];
  }
}

void CholeskyFactor::lower_solve_in_place(double* x) const {
  const Index n = order();
  const Index* cp = k_.outerIndexPtr();
  const Index* ri = k_.innerIndexPtr();
  const double* v = k_.valuePtr();
  for (Index j = 0; j < n; ++j) {
    const double xj = (x[j] /= v[cp[j]]);
    if (xj == 0.0) continue;
    for (Index p = cp[j] + 1; p < cp[j + 1]; ++p) x[ri[p]] -= v[p] * xj;
  }
}

void CholeskyFactor::upper_solve_in_place(double* x) const {
  const Index n = order();
  const Index* cp = k_.outerIndexPtr();
  const Index* ri = k_.innerIndexPtr();
  const double* v = k_.valuePtr();
  for (Index j = n - 1; j >= 0; --j) {
    double s = x[j];
    for (Index p = cp[j] + 1; p < cp[j + 1]; ++p) s -= v[p] * x[ri[p]];
    x[j] = s / v[cp[j]];
  }
}

DenseMatrix CholeskyFactor::forward(const DenseMatrix& rhs) const {
  if (rhs.rows() != order()) throw DimensionMismatch("cholesky forward: row count mismatch");
  const Index n = order();
  DenseMatrix out(n, rhs.cols());
  if (rhs.cols() == 1) {
    for (Index i = 0; i < n; ++i) out(i, 0) = rhs(perm_[static_cast<std::size_t>(i)], 0);
    lower_solve_in_place(out.data());
    return out;
  }
  RowMajorMatrix work(n, rhs.cols());
  for (Index i = 0; i < n; ++i) work.row(i) = rhs.row(perm_[static_cast<std::size_t>(i)]);
  lower_solve_in_place(work);
  out = work;
  return out;
}

DenseMatrix CholeskyFactor::backward(const DenseMatrix& rhs) const {
  if (rhs.rows() != order()) throw DimensionMismatch("cholesky backward: row count mismatch");
  const Index n = order();
  DenseMatrix out(n, rhs.cols());
  if (rhs.cols() == 1) {
    DenseVector work = rhs.col(0);
    upper_solve_in_place(work.data());
    for (Index i = 0; i < n; ++i) out(perm_[static_cast<std::size_t>(i)], 0) = work[i];
    return out;
  }
  RowMajorMatrix work = rhs;
  upper_solve_in_place(work);
  for (Index i = 0; i < n; ++i) out.row(perm_[static_cast<std::size_t>(i)]) = work.row(i);
  return out;
}

DenseMatrix CholeskyFactor::solve(const DenseMatrix& rhs) const {
  if (rhs.rows() != order()) throw DimensionMismatch("cholesky solve: row count mismatch");
  const Index n = order();
  if (rhs.cols() == 1) return solve(DenseVector(rhs.col(0)));
  RowMajorMatrix work(n, rhs.cols());
  for (Index i = 0; i < n; ++i) work.row(i) = rhs.row(perm_[static_cast<std::size_t>(i)]);
  lower_solve_in_place(work);
  upper_solve_in_place(work);
  DenseMatrix out(n, rhs.cols());
  for (Index i = 0; i < n; ++i) out.row(perm_[static_cast<std::size_t>(i)]) = work.row(i);
  return out;
}

DenseVector CholeskyFactor::solve(const DenseVector& rhs) const {
  if (rhs.size() != order()) throw DimensionMismatch("cholesky solve: row count mismatch");
  const Index n = order();
  DenseVector work(n);
  for (Index i = 0; i < n; ++i) work[i] = rhs[perm_[static_cast<std::size_t>(i)]];
  lower_solve_in_place(work.data());
  upper_solve_in_place(work.data());
  DenseVector out(n);
  for (Index i = 0; i < n; ++i) out[perm_[static_cast<std::size_t>(i)]] = work[i];
  return out;
}

}  // namespace turbomor
