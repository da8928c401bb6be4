// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include "turbomor/linalg/householder.hpp"

#include <cmath>

namespace turbomor {

struct HouseholderBuilder {
  static HouseholderQr factor(const DenseMatrix& m, Index panel_width);
};

namespace {

// Reflector for column `j` of `a` below the diagonal, LAPACK dlarfg style.
// Overwrites a(j, j) with beta and a(j+1:, j) with the tail of v.
double make_reflector(DenseMatrix& a, Index j) {
  const Index r = a.rows();
  const double alpha = a(j, j);
  const double xnorm = r - j - 1 > 0 ? a.col(j).tail(r - j - 1).norm() : 0.0;
  if (xnorm == 0.0) return 0.0;
  const double beta = -std::copysign(std::hypot(alpha, xnorm), alpha);
  a.col(j).tail(r - j - 1) /= (alpha - beta);
  a(j, j) = beta;
  return (beta - alpha) / beta;
}

}  // namespace

HouseholderQr HouseholderBuilder::factor(const DenseMatrix& m, Index panel_width) {
  if (!m.allFinite()) throw InputError("householder_qr: non-finite input");
  if (panel_width < 1) panel_width = 1;
  const Index r = m.rows();
  const Index p = m.cols();
  const Index k = std::min(r, p);

  DenseMatrix a = m;
  HouseholderQr out;
  HouseholderFactor& f = out.q;
  f.v_ = DenseMatrix::Zero(r, k);
  f.tau_ = DenseVector::Zero(k);

  for (Index j0 = 0; j0 < k; j0 += panel_width) {
    const Index jb = std::min(panel_width, k - j0);
    for (Index j = j0; j < j0 + jb; ++j) {
      const double tau = make_reflector(a, j);
      f.tau_[j] = tau;
      f.v_(j, j) = 1.0;
      f.v_.col(j).tail(r - j - 1) = a.col(j).tail(r - j - 1);
      const Index rest = j0 + jb - j - 1;
      if (tau != 0.0 && rest > 0) {
        auto v = f.v_.col(j).tail(r - j);
        auto block = a.block(j, j + 1, r - j, rest);
        Eigen::RowVectorXd w = v.transpose() * block;
        block.noalias() -= tau * v * w;
      }
    }

    HouseholderFactor::Panel panel{j0, DenseMatrix::Zero(jb, jb)};
    for (Index i = 0; i < jb; ++i) {
      const double tau = f.tau_[j0 + i];
      panel.t(i, i) = tau;
      if (i > 0 && tau != 0.0) {
        const Index row = j0 + i;
        DenseVector w = f.v_.block(row, j0, r - row, i).transpose() * f.v_.col(row).tail(r - row);
        DenseVector tw = panel.t.topLeftCorner(i, i).triangularView<Eigen::Upper>() * w;
        panel.t.col(i).head(i) = -tau * tw;
      }
    }

    const Index trailing = p - j0 - jb;
    if (trailing > 0) {
      auto vp = f.v_.block(j0, j0, r - j0, jb);
      auto block = a.block(j0, j0 + jb, r - j0, trailing);
      DenseMatrix w = vp.transpose() * block;
      w = panel.t.triangularView<Eigen::Upper>().transpose() * w;
      block.noalias() -= vp * w;
    }
    f.panels_.push_back(std::move(panel));
  }

  out.r = a.topRows(k).triangularView<Eigen::Upper>();
  return out;
}

HouseholderQr householder_qr(const DenseMatrix& m, Index panel_width) {
  return HouseholderBuilder::factor(m, panel_width);
}

void HouseholderFactor::apply_in_place(Side side, DenseMatrix& x) const {
  const Index r = rows();
  if (side == Side::right) {
    if (x.cols() != r) throw DimensionMismatch("apply_q: column count must equal reflector length");
    for (const Panel& panel : panels_) {
      const Index jb = panel.t.cols();
      auto vp = v_.block(panel.start, panel.start, r - panel.start, jb);
      auto xs = x.rightCols(r - panel.start);
      DenseMatrix w = xs * vp;
      w = w * panel.t.triangularView<Eigen::Upper>();
      xs.noalias() -= w * vp.transpose();
    }
    return;
  }
  if (x.rows() != r) throw DimensionMismatch("apply_q: row count must equal reflector length");
  const bool transpose = side == Side::left_transpose;
  const auto count = static_cast<std::ptrdiff_t>(panels_.size());
  for (std::ptrdiff_t n = 0; n < count; ++n) {
    const Panel& panel = panels_[static_cast<std::size_t>(transpose ? n : count - 1 - n)];
    const Index jb = panel.t.cols();
    auto vp = v_.block(panel.start, panel.start, r - panel.start, jb);
    auto xs = x.bottomRows(r - panel.start);
    DenseMatrix w = vp.transpose() * xs;
    if (transpose)
      w = panel.t.triangularView<Eigen::Upper>().transpose() * w;
    else
      w = panel.t.triangularView<Eigen::Upper>() * w;
    xs.noalias() -= vp * w;
  }
}

DenseMatrix HouseholderFactor::apply(Side side, const DenseMatrix& x) const {
  DenseMatrix out = x;
  apply_in_place(side, out);
  return out;
}

DenseMatrix HouseholderFactor::leading_columns(Index count) const {
  const Index r = rows();
  if (count > r) throw DimensionMismatch("leading_columns: count exceeds reflector length");
  DenseMatrix x = DenseMatrix::Zero(r, count);
  x.topRows(count).setIdentity();
  // Panels starting at or beyond `count` see a zero block and act trivially.
  for (auto it = panels_.rbegin(); it != panels_.rend(); ++it) {
    if (it->start >= count) continue;
    const Index jb = it->t.cols();
    auto vp = v_.block(it->start, it->start, r - it->start, jb);
    auto xs = x.bottomRows(r - it->start);
    DenseMatrix w = vp.transpose() * xs;
    w = it->t.triangularView<Eigen::Upper>() * w;
    xs.noalias() -= vp * w;
  }
  return x;
}

DenseMatrix apply_q(const HouseholderFactor& f, Side side, const DenseMatrix& x) {
  return f.apply(side, x);
}

}  // namespace turbomor
