// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "turbomor/common.hpp"

namespace turbomor {

enum class Side { left, left_transpose, right };

/// Q = H_1 H_2 ... H_k with H_i = I - tau_i v_i v_i^T, stored as unit lower
/// trapezoidal reflectors plus compact-WY panel factors. Q is never formed.
class HouseholderFactor {
 public:
  HouseholderFactor() = default;

  Index rows() const { return v_.rows(); }
  Index reflector_count() const { return v_.cols(); }
  const DenseMatrix& reflectors() const { return v_; }
  const DenseVector& taus() const { return tau_; }

  /// QX, Q^T X or XQ.
  DenseMatrix apply(Side side, const DenseMatrix& x) const;
  /// In-place variant of `apply`.
  void apply_in_place(Side side, DenseMatrix& x) const;
  /// The first `count` columns of Q.
  DenseMatrix leading_columns(Index count) const;

 private:
  friend struct HouseholderBuilder;

  struct Panel {
    Index start;
    DenseMatrix t;  // upper triangular, Q_panel = I - V T V^T
  };

  DenseMatrix v_;
  DenseVector tau_;
  std::vector<Panel> panels_;
};

struct HouseholderQr {
  HouseholderFactor q;
  DenseMatrix r;  // min(rows, cols) x cols, upper trapezoidal
};

/// Blocked Householder QR of a dense block. Q^T M = [R; 0]. Rank-deficient
/// input is allowed; a zero column yields a zero row of R.
HouseholderQr householder_qr(const DenseMatrix& m, Index panel_width = 64);

DenseMatrix apply_q(const HouseholderFactor& f, Side side, const DenseMatrix& x);

}  // namespace turbomor
