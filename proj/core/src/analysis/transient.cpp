// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include "turbomor/analysis/transient.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>

#include "turbomor/linalg/cholesky.hpp"

namespace turbomor {

double PwlSource::at(double time) const {
  if (t.empty()) return 0.0;
  if (time <= t.front()) return v.front();
  if (time >= t.back()) return v.back();
  const auto it = std::upper_bound(t.begin(), t.end(), time);
  const std::size_t hi = static_cast<std::size_t>(it - t.begin());
  const std::size_t lo = hi - 1;
  const double span = t[hi] - t[lo];
  if (span <= 0.0) return v[hi];
  const double w = (time - t[lo]) / span;
  return v[lo] + w * (v[hi] - v[lo]);
}

PwlSource PwlSource::constant(double value) { return PwlSource{{0.0}, {value}}; }

PwlSource PwlSource::step(double value, double t0, double rise) {
  if (rise <= 0.0) {
    if (t0 <= 0.0) return constant(value);
    return PwlSource{{t0, t0}, {0.0, value}};
  }
  return PwlSource{{t0, t0 + rise}, {0.0, value}};
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Solves with A = G + alpha C and multiplies by E = alpha C - G.
class Stepper {
 public:
  virtual ~Stepper() = default;
  virtual void solve(DenseVector& x) const = 0;
  virtual void multiply(const DenseVector& x, DenseVector& out) const = 0;
};

class SparseStepper : public Stepper {
 public:
  SparseStepper(const SparseMatrix& a, SparseMatrix e) : e_(std::move(e)) {
    k_ = cholesky(SparseSymMatrix::from_full(a, std::numeric_limits<double>::infinity()));
  }
  void solve(DenseVector& x) const override { x = k_.solve(x); }
  void multiply(const DenseVector& x, DenseVector& out) const override { out.noalias() = e_ * x; }

 private:
  CholeskyFactor k_;
  SparseMatrix e_;
};

class DenseStepper : public Stepper {
 public:
  DenseStepper(const SparseMatrix& a, const SparseMatrix& e) : e_(e) {
    llt_.compute(DenseMatrix(a));
    if (llt_.info() != Eigen::Success)
      throw SingularMatrix("transient: G + (2/dt) C is not positive definite");
  }
  void solve(DenseVector& x) const override { llt_.solveInPlace(x); }
  void multiply(const DenseVector& x, DenseVector& out) const override { out.noalias() = e_ * x; }

 private:
  Eigen::LLT<DenseMatrix> llt_;
  DenseMatrix e_;
};

// Block Cholesky of a block-tridiagonal matrix with dense blocks.
class BlockStepper : public Stepper {
 public:
  BlockStepper(const SparseMatrix& a, const SparseMatrix& e, std::vector<Index> offsets)
      : off_(std::move(offsets)) {
    const std::size_t nb = off_.size() - 1;
    diag_.resize(nb);
    sub_.resize(nb);
    e_diag_.resize(nb);
    e_sub_.resize(nb);
    const DenseMatrix ad(a);
    const DenseMatrix ed(e);
    for (std::size_t j = 0; j < nb; ++j) {
      const Index o = off_[j];
      const Index w = off_[j + 1] - o;
      e_diag_[j] = ed.block(o, o, w, w);
      DenseMatrix s = ad.block(o, o, w, w);
      if (j > 0) {
        const Index po = off_[j - 1];
        const Index pw = o - po;
        e_sub_[j] = ed.block(o, po, w, pw);
        // L~_j = A_{j,j-1} Lc_{j-1}^{-T}
        DenseMatrix t = ad.block(o, po, w, pw).transpose();
        diag_[j - 1].matrixL().solveInPlace(t);
        DenseMatrix lt = t.transpose();
        s.noalias() -= lt * lt.transpose();
        sub_[j] = std::move(lt);
      }
      diag_[j].compute(s);
      if (diag_[j].info() != Eigen::Success)
        throw SingularMatrix("transient: G + (2/dt) C is not positive definite");
    }
  }

  void solve(DenseVector& x) const override {
    const std::size_t nb = diag_.size();
    for (std::size_t j = 0; j < nb; ++j) {
      auto xj = x.segment(off_[j], off_[j + 1] - off_[j]);
      if (j > 0) xj.noalias() -= sub_[j] * x.segment(off_[j - 1], off_[j] - off_[j - 1]);
      diag_[j].matrixL().solveInPlace(xj);
    }
    for (std::size_t jj = nb; jj-- > 0;) {
      auto xj = x.segment(off_[jj], off_[jj + 1] - off_[jj]);
      if (jj + 1 < nb) xj.noalias() -= sub_[jj + 1].transpose() * x.segment(off_[jj + 1], off_[jj + 2] - off_[jj + 1]);
      diag_[jj].matrixU().solveInPlace(xj);
    }
  }

  void multiply(const DenseVector& x, DenseVector& out) const override {
    out.resize(x.size());
    const std::size_t nb = diag_.size();
    for (std::size_t j = 0; j < nb; ++j) {
      const Index o = off_[j];
      const Index w = off_[j + 1] - o;
      auto oj = out.segment(o, w);
      oj.noalias() = e_diag_[j] * x.segment(o, w);
      if (j > 0) oj.noalias() += e_sub_[j] * x.segment(off_[j - 1], o - off_[j - 1]);
      if (j + 1 < nb) oj.noalias() += e_sub_[j + 1].transpose() * x.segment(off_[j + 1], off_[j + 2] - off_[j + 1]);
    }
  }

 private:
  std::vector<Index> off_;
  std::vector<Eigen::LLT<DenseMatrix>> diag_;
  std::vector<DenseMatrix> sub_;
  std::vector<DenseMatrix> e_diag_;
  std::vector<DenseMatrix> e_sub_;
};

// Block boundaries if every nonzero of `a` lies within one block of the
// diagonal, otherwise empty.
std::vector<Index> tridiagonal_offsets(const SparseMatrix& a, const std::vector<BlockInfo>& blocks) {
  if (blocks.size() < 2) return {};
  std::vector<std::pair<Index, Index>> spans;
  for (const BlockInfo& b : blocks)
    if (b.width > 0) spans.emplace_back(b.offset, b.width);
  std::sort(spans.begin(), spans.end());
  std::vector<Index> off{0};
  for (const auto& [o, w] : spans) {
    if (o != off.back()) return {};
    off.push_back(o + w);
  }
  if (off.back() != a.rows() || off.size() < 3) return {};
  std::vector<Index> block_of(static_cast<std::size_t>(a.rows()));
  for (std::size_t j = 0; j + 1 < off.size(); ++j)
    for (Index i = off[j]; i < off[j + 1]; ++i) block_of[static_cast<std::size_t>(i)] = static_cast<Index>(j);
  for (Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
      if (std::abs(block_of[static_cast<std::size_t>(it.row())] - block_of[static_cast<std::size_t>(k)]) > 1)
        return {};
  return off;
}

}  // namespace

TransientResult transient_sim(const SparseMatrix& g, const SparseMatrix& c, const SparseMatrix& b,
                              const std::vector<PwlSource>& sources, double t_end, double dt,
                              const TransientOptions& options, const std::vector<BlockInfo>& blocks) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("transient: dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InputError("transient: t_end must be non-negative");
  const Index m = g.rows();
  const Index p = b.cols();
  if (g.cols() != m || c.rows() != m || c.cols() != m || b.rows() != m)
    throw DimensionMismatch("transient: inconsistent dimensions");
  if (!sources.empty() && static_cast<Index>(sources.size()) != p)
    throw DimensionMismatch("transient: " + std::to_string(sources.size()) + " sources for " +
                            std::to_string(p) + " ports");

  const double alpha = 2.0 / dt;
  SparseMatrix a = g + alpha * c;
  SparseMatrix e = alpha * c - g;
  a.makeCompressed();
  e.makeCompressed();

  TransientResult out;
  out.dt = dt;
  const auto t_factor = Clock::now();
  std::unique_ptr<Stepper> stepper;
  TransientBackend backend = options.backend;
  std::vector<Index> offsets;
  if (backend == TransientBackend::automatic || backend == TransientBackend::block_tridiagonal) {
    offsets = tridiagonal_offsets(a, blocks);
    if (!offsets.empty()) {
      backend = TransientBackend::block_tridiagonal;
    } else if (backend == TransientBackend::block_tridiagonal) {
      throw InputError("transient: model is not block tridiagonal");
    } else {
      const double density = m > 0 ? static_cast<double>(a.nonZeros()) / (static_cast<double>(m) * m) : 1.0;
      backend = (m <= 5000 && density >= 0.2) ? TransientBackend::dense : TransientBackend::sparse;
    }
  }
  try {
    switch (backend) {
      case TransientBackend::dense:
        stepper = std::make_unique<DenseStepper>(a, e);
        out.backend = "dense";
        break;
      case TransientBackend::block_tridiagonal:
        stepper = std::make_unique<BlockStepper>(a, e, offsets);
        out.backend = "block-tridiagonal";
        break;
      default:
        stepper = std::make_unique<SparseStepper>(a, e);
        out.backend = "sparse";
        break;
    }
  } catch (const NotPositiveDefinite&) {
    throw SingularMatrix("transient: G + (2/dt) C is singular");
  }
  out.factor_seconds = seconds_since(t_factor);

  const Index steps = static_cast<Index>(std::ceil(t_end / dt - 1e-9));
  out.time.resize(static_cast<std::size_t>(steps) + 1);
  for (Index k = 0; k <= steps; ++k) out.time[static_cast<std::size_t>(k)] = static_cast<double>(k) * dt;
  out.y = DenseMatrix::Zero(steps + 1, p);

  auto input = [&](double t) {
    DenseVector u = DenseVector::Zero(p);
    for (std::size_t i = 0; i < sources.size(); ++i) u[static_cast<Index>(i)] = sources[i].at(t);
    return u;
  };
  const SparseMatrix bt = b.transpose();
  auto record = [&](Index k, const DenseVector& x) {
    out.y.row(k) = (bt * x).transpose();
    if (options.record_energy) out.energy.push_back(x.dot(c * x));
  };

  const auto t_steps = Clock::now();
  DenseVector x = DenseVector::Zero(m);
  DenseVector rhs(m);
  record(0, x);
  if (steps > 0) {
    // Two backward Euler half steps: (G + (2/dt) C) x+ = (2/dt) C x + B u.
    for (int half = 1; half <= 2; ++half) {
      rhs.noalias() = alpha * (c * x);
      rhs.noalias() += b * input(0.5 * dt * half);
      stepper->solve(rhs);
      x = rhs;
    }
    record(1, x);
  }
  DenseVector u_prev = input(dt);
  for (Index k = 2; k <= steps; ++k) {
    const DenseVector u_next = input(static_cast<double>(k) * dt);
    stepper->multiply(x, rhs);
    rhs.noalias() += b * (u_prev + u_next);
    stepper->solve(rhs);
    x.swap(rhs);
    record(k, x);
    u_prev = u_next;
  }
  out.step_seconds = seconds_since(t_steps);
  return out;
}

TransientResult transient_sim(const DescriptorSystem& sys, const std::vector<PwlSource>& sources,
                              double t_end, double dt, const TransientOptions& options) {
  return transient_sim(sys.g, sys.c, sys.b, sources, t_end, dt, options);
}

TransientResult transient_sim(const ReducedModel& rom, const std::vector<PwlSource>& sources,
                              double t_end, double dt, const TransientOptions& options) {
  return transient_sim(rom.g, rom.c, rom.b, sources, t_end, dt, options, rom.blocks);
}

ErrorMetrics error_metrics(const TransientResult& reference, const TransientResult& candidate) {
  if (reference.time.size() != candidate.time.size())
    throw InputError("error_metrics: time grids differ in length");
  for (std::size_t i = 0; i < reference.time.size(); ++i)
    if (std::abs(reference.time[i] - candidate.time[i]) > 1e-9 * std::max(std::abs(reference.time[i]), reference.dt))
      throw InputError("error_metrics: time grids differ");
  if (reference.y.cols() != candidate.y.cols()) throw InputError("error_metrics: port counts differ");
  ErrorMetrics out;
  const DenseMatrix diff = reference.y - candidate.y;
  for (Index j = 0; j < diff.cols(); ++j) {
    const double v = diff.rows() ? diff.col(j).cwiseAbs().maxCoeff() : 0.0;
    out.max_abs.push_back(v);
    out.global_max = std::max(out.global_max, v);
  }
  out.rms = diff.size() ? std::sqrt(diff.squaredNorm() / static_cast<double>(diff.size())) : 0.0;
  return out;
}

}  // namespace turbomor
