// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include "turbomor/reduce/turbomor.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "turbomor/linalg/schur.hpp"

namespace turbomor {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

auto idx(Index i) { return static_cast<std::size_t>(i); }

SparseMatrix symmetric_part(const SparseMatrix& a) {
  SparseMatrix t = a.transpose();
  SparseMatrix s = 0.5 * (a + t);
  return pruned(s);
}

std::vector<Index> port_rows(const SparseMatrix& b) {
  std::vector<Index> rows;
  for (Index j = 0; j < b.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(b, j); it; ++it)
      if (it.value() != 0.0) rows.push_back(it.row());
  return rows;
}

struct Leaf {
  int partition = -1;
  std::vector<Index> owned;
  std::vector<Index> interior;
  std::vector<Index> promoted;
  std::vector<Index> coupled;  // outer rows the interior couples to
  std::shared_ptr<CholeskyFactor> k;
  Index fill_in = 0;
  bool pass_through = false;
  DenseMatrix delta_g;
  DenseMatrix delta_c;
  std::vector<DenseMatrix> c11;  // iteration blocks 2..
  std::vector<DenseMatrix> r;
  std::vector<IterationStats> stats;
  bool truncated = false;
};

class Engine {
 public:
  Engine(const DescriptorSystem& sys, const ReductionOptions& options)
      : options_(options), m_(sys.order()), p_(sys.port_count()) {
    validate(sys, options.symmetry_tolerance);
    g_ = symmetric_part(sys.g);
    c_ = symmetric_part(sys.c);
    diag_ = DenseVector(g_.diagonal());
    max_diag_ = diag_.size() ? diag_.cwiseAbs().maxCoeff() : 0.0;
    SparseMatrix pattern = g_.cwiseAbs() + c_.cwiseAbs();
    pattern_ = pruned(pattern);
    outer_.assign(idx(m_), 0);
    promotion_budget_ = options.promotion_limit * static_cast<double>(m_ - p_);
  }

  void mark_outer(Index node) { outer_[idx(node)] = 1; }
  bool is_outer(Index node) const { return outer_[idx(node)] != 0; }

  // Outer rows adjacent to the interior, in first-seen order.
  std::vector<Index> adjacent_outer(const Leaf& leaf) const {
    std::vector<char> seen(idx(m_), 0);
    std::vector<Index> out;
    for (Index node : leaf.interior)
      for (SparseMatrix::InnerIterator it(pattern_, node); it; ++it)
        if (is_outer(it.row()) && !seen[idx(it.row())]) {
          seen[idx(it.row())] = 1;
          out.push_back(it.row());
        }
    return out;
  }

  void promote(Leaf& leaf, Index node) {
    ++promoted_total_;
    if (static_cast<double>(promoted_total_) > promotion_budget_)
      throw PromotionOverflow("promoted " + std::to_string(promoted_total_) +
                              " rows, above the limit of " +
                              std::to_string(static_cast<Index>(promotion_budget_)) +
                              " internal nodes");
    leaf.promoted.push_back(node);
    leaf.owned.push_back(node);
    mark_outer(node);
  }

  // Factors G22 of the leaf, promoting failing pivots into the outer block.
  void factor(Leaf& leaf) {
    const double zero_pivot = options_.pivot_tolerance * max_diag_;
    std::vector<Index> kept;
    for (Index node : leaf.interior) {
      if (diag_[node] <= zero_pivot)
        promote(leaf, node);
      else
        kept.push_back(node);
    }
    leaf.interior = std::move(kept);

    CholeskyOptions copt;
    copt.ordering = options_.ordering;
    copt.pivot_tolerance = options_.pivot_tolerance;
    while (!leaf.interior.empty()) {
      SparseMatrix g22 = submatrix(g_, leaf.interior, leaf.interior);
      try {
        auto k = std::make_shared<CholeskyFactor>(
            cholesky(SparseSymMatrix::from_full(g22, std::numeric_limits<double>::infinity()), copt));
        leaf.fill_in = k->fill_in();
        leaf.k = std::move(k);
        return;
      } catch (const NotPositiveDefinite& e) {
        const Index node = leaf.interior[idx(e.pivot_index())];
        promote(leaf, node);
        leaf.interior.erase(leaf.interior.begin() + e.pivot_index());
      }
    }
  }

  void eliminate(Leaf& leaf) {
    SparseMatrix g21 = submatrix(g_, leaf.interior, leaf.coupled);
    SparseMatrix c21 = submatrix(c_, leaf.interior, leaf.coupled);
    SparseMatrix c22 = submatrix(c_, leaf.interior, leaf.interior);
    SchurUpdate u = schur_update(g21, c21, c22, *leaf.k);
    leaf.delta_g = std::move(u.delta_g11);
    leaf.delta_c = std::move(u.delta_c11);
    inner_.k = leaf.k;
    inner_.c22 = std::move(c22);
    inner_.q.clear();
    inner_.coupling = std::move(u.c21);
    inner_.whitened = false;
    inner_.next_iteration = 2;
  }

  void iterate(Leaf& leaf, int q) {
    for (int j = 2; j <= q; ++j) {
      const auto t0 = Clock::now();
      const Index n = inner_.interior_order();
      const Index w = inner_.coupling.cols();
      if (n == 0 || w == 0) {
        if (w > 0) leaf.truncated = true;
        break;
      }
      IterationStep step = reduce_iteration_j(std::move(inner_), options_.panel_width, j == q);
      if (step.truncated) leaf.truncated = true;
      IterationStats stats;
      stats.iteration = j;
      stats.width = step.c11.rows();
      stats.interior = n;
      stats.seconds = seconds_since(t0);
      leaf.stats.push_back(stats);
      leaf.c11.push_back(std::move(step.c11));
      leaf.r.push_back(std::move(step.r));
      inner_ = std::move(step.next);
    }
    inner_ = InnerState{};
  }

  const SparseMatrix& g() const { return g_; }
  const SparseMatrix& c() const { return c_; }
  Index order() const { return m_; }
  Index ports() const { return p_; }
  InnerState& inner() { return inner_; }

 private:
  ReductionOptions options_;
  Index m_;
  Index p_;
  SparseMatrix g_;
  SparseMatrix c_;
  SparseMatrix pattern_;
  DenseVector diag_;
  double max_diag_ = 0.0;
  std::vector<char> outer_;
  Index promoted_total_ = 0;
  double promotion_budget_ = 0.0;
  InnerState inner_;
};

std::string node_label(const DescriptorSystem& sys, Index node) {
  if (idx(node) < sys.node_labels.size()) return sys.node_labels[idx(node)];
  return std::to_string(node + 1);
}

}  // namespace

DescriptorSystem ReducedModel::as_system() const {
  DescriptorSystem sys;
  sys.g = g;
  sys.c = c;
  sys.b = b;
  sys.node_labels = labels;
  return sys;
}

const char* to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::outer: return "outer";
    case BlockKind::iteration: return "iteration";
    case BlockKind::separator: return "separator";
  }
  return "outer";
}

BlockKind block_kind_from_string(const std::string& name) {
  if (name == "outer") return BlockKind::outer;
  if (name == "iteration") return BlockKind::iteration;
  if (name == "separator") return BlockKind::separator;
  throw InputError("unknown block kind '" + name + "'");
}

DenseMatrix apply_interior(const InnerState& state, DenseMatrix y) {
  for (auto it = state.q.rbegin(); it != state.q.rend(); ++it) {
    const Index pad = it->rows() - y.rows();
    DenseMatrix padded(it->rows(), y.cols());
    padded.topRows(pad).setZero();
    padded.bottomRows(y.rows()) = y;
    it->apply_in_place(Side::left, padded);
    y = std::move(padded);
  }
  DenseMatrix t = state.k->backward(y);
  y = state.k->forward(state.c22 * t);
  for (const HouseholderFactor& q : state.q) {
    q.apply_in_place(Side::left_transpose, y);
    const Index keep = y.rows() - q.reflector_count();
    DenseMatrix tail = y.bottomRows(keep);
    y = std::move(tail);
  }
  return y;
}

IterationStep reduce_iteration_j(InnerState state, Index panel_width, bool final) {
  IterationStep out;
  if (!state.whitened) {
    if (state.coupling.rows() > 0) state.coupling = state.k->forward(state.coupling);
    state.whitened = true;
  }
  const Index n = state.coupling.rows();
  const Index w = state.coupling.cols();
  if (n == 0 || w == 0) {
    out.c11 = DenseMatrix(0, 0);
    out.r = DenseMatrix(0, w);
    out.truncated = w > 0;
    out.next = std::move(state);
    return out;
  }

  HouseholderQr qr = householder_qr(state.coupling, panel_width);
  const Index b = qr.r.rows();
  out.truncated = b < w;
  DenseMatrix y0 = qr.q.leading_columns(b);
  DenseMatrix z = apply_interior(state, y0);
  qr.q.apply_in_place(Side::left_transpose, z);
  out.c11 = symmetrized(z.topRows(b));
  if (final) {
    state.coupling = DenseMatrix(0, b);
  } else {
    state.coupling = z.bottomRows(n - b);
    state.q.push_back(std::move(qr.q));
  }
  out.r = std::move(qr.r);
  ++state.next_iteration;
  out.next = std::move(state);
  return out;
}

Iteration1Result reduce_iteration1(const DescriptorSystem& sys, const ReductionOptions& options) {
  if (!is_canonical(sys)) throw InputError("reduce_iteration1: system must be canonical (ports first)");
  Engine engine(sys, options);
  const Index m = sys.order();
  const Index p = sys.port_count();
  Leaf leaf;
  for (Index i = 0; i < p; ++i) {
    leaf.owned.push_back(i);
    engine.mark_outer(i);
  }
  for (Index i = p; i < m; ++i) leaf.interior.push_back(i);
  engine.factor(leaf);
  leaf.coupled = leaf.owned;

  Iteration1Result out;
  out.promoted = leaf.promoted;
  out.fill_in = leaf.fill_in;
  out.outer.rows = leaf.owned;
  const Index pe = static_cast<Index>(leaf.owned.size());
  out.outer.g11 = symmetrized(DenseMatrix(submatrix(engine.g(), leaf.owned, leaf.owned)));
  out.outer.c11 = symmetrized(DenseMatrix(submatrix(engine.c(), leaf.owned, leaf.owned)));
  out.outer.b1 = DenseMatrix::Zero(pe, p);
  out.outer.b1.topRows(p).setIdentity();
  if (!leaf.interior.empty()) {
    engine.eliminate(leaf);
    out.outer.g11 += leaf.delta_g;
    out.outer.c11 += leaf.delta_c;
    out.inner = std::move(engine.inner());
  } else {
    out.inner.coupling = DenseMatrix(0, pe);
    out.inner.whitened = true;
  }
  return out;
}

std::pair<ReducedModel, ReductionReport> reduce_with_layout(const DescriptorSystem& sys, int q,
                                                            const ReductionLayout& layout,
                                                            const ReductionOptions& options) {
  if (q < 1) throw InputError("q must be at least 1");
  const auto t_start = Clock::now();
  Engine engine(sys, options);
  const Index m = sys.order();
  const Index p = sys.port_count();

  std::vector<Leaf> leaves;
  std::vector<char> assigned(idx(m), 0);
  auto claim = [&](Index node) {
    if (node < 0 || node >= m) throw InputError("layout references node outside the system");
    if (assigned[idx(node)]) throw InputError("layout assigns node " + std::to_string(node + 1) + " twice");
    assigned[idx(node)] = 1;
  };
  for (const LeafSpec& spec : layout.leaves) {
    Leaf leaf;
    leaf.partition = spec.partition;
    leaf.owned = spec.owned_outer;
    leaf.interior = spec.interior;
    for (Index node : leaf.owned) {
      claim(node);
      engine.mark_outer(node);
    }
    for (Index node : leaf.interior) claim(node);
    leaves.push_back(std::move(leaf));
  }
  for (Index node : layout.separators) {
    claim(node);
    engine.mark_outer(node);
  }
  for (Index i = 0; i < m; ++i)
    if (!assigned[idx(i)]) throw InputError("layout leaves node " + std::to_string(i + 1) + " unassigned");
  for (Index node : port_rows(sys.b))
    if (!engine.is_outer(node)) throw InputError("a port node is placed in a leaf interior");

  ReductionReport report;
  report.moments_matched = 2 * q;
  report.partitions = static_cast<Index>(leaves.size());

  // Promotion and pass-through decisions fix the outer set.
  const auto t_factor = Clock::now();
  for (Leaf& leaf : leaves) {
    if (layout.partitioned && !leaf.interior.empty()) {
      const auto coupled = engine.adjacent_outer(leaf);
      if (static_cast<Index>(coupled.size()) >= static_cast<Index>(leaf.interior.size())) {
        leaf.pass_through = true;
        for (Index node : leaf.interior) {
          leaf.owned.push_back(node);
          engine.mark_outer(node);
        }
        leaf.interior.clear();
        ++report.pass_through;
        report.notes.push_back("partition " + std::to_string(leaf.partition) +
                               " passed through unreduced (" + std::to_string(coupled.size()) +
                               " coupled rows, " + std::to_string(leaf.owned.size()) + " nodes)");
        continue;
      }
    }
    engine.factor(leaf);
  }
  report.timings["factor"] = seconds_since(t_factor);

  // ROM rows: per leaf its outer rows then its iteration blocks, separators last.
  std::vector<Index> rank(idx(m), -1);
  {
    Index next = 0;
    for (const Leaf& leaf : leaves)
      for (Index node : leaf.owned) rank[idx(node)] = next++;
    for (Index node : layout.separators) rank[idx(node)] = next++;
  }

  const auto t_iter = Clock::now();
  for (Leaf& leaf : leaves) {
    if (leaf.interior.empty()) continue;
    if (layout.partitioned) {
      leaf.coupled = engine.adjacent_outer(leaf);
      std::sort(leaf.coupled.begin(), leaf.coupled.end(),
                [&](Index a, Index b) { return rank[idx(a)] < rank[idx(b)]; });
    } else {
      leaf.coupled = leaf.owned;
    }
    if (leaf.coupled.empty()) {
      report.notes.push_back("partition " + std::to_string(leaf.partition) +
                             " has no coupling to the outer rows and was dropped");
      continue;
    }
    const auto t0 = Clock::now();
    engine.eliminate(leaf);
    IterationStats s1;
    s1.iteration = 1;
    s1.width = static_cast<Index>(leaf.coupled.size());
    s1.interior = static_cast<Index>(leaf.interior.size());
    s1.fill_in = leaf.fill_in;
    s1.seconds = seconds_since(t0);
    leaf.stats.push_back(s1);
    engine.iterate(leaf, q);
    if (leaf.truncated) report.truncated = true;
  }
  report.timings["iterations"] = seconds_since(t_iter);

  // Assembly.
  const auto t_asm = Clock::now();
  ReducedModel rom;
  rom.method = layout.partitioned ? "turbomor-partitioned" : "turbomor";
  rom.q = q;
  rom.p = p;
  std::vector<Index> pos(idx(m), -1);
  std::vector<std::vector<Index>> block_offset(leaves.size());
  Index order = 0;
  for (std::size_t li = 0; li < leaves.size(); ++li) {
    const Leaf& leaf = leaves[li];
    if (!leaf.owned.empty()) {
      rom.blocks.push_back({order, static_cast<Index>(leaf.owned.size()), BlockKind::outer, 1, leaf.partition});
      for (Index node : leaf.owned) {
        pos[idx(node)] = order++;
        rom.labels.push_back(node_label(sys, node));
      }
    }
    for (std::size_t j = 0; j < leaf.c11.size(); ++j) {
      const Index width = leaf.c11[j].rows();
      block_offset[li].push_back(order);
      rom.blocks.push_back({order, width, BlockKind::iteration, static_cast<int>(j) + 2, leaf.partition});
      for (Index k = 0; k < width; ++k) {
        std::string label = "x";
        if (layout.partitioned) label += std::to_string(leaf.partition) + "_";
        label += std::to_string(j + 2) + "_" + std::to_string(k + 1);
        rom.labels.push_back(std::move(label));
      }
      order += width;
    }
  }
  if (!layout.separators.empty()) {
    rom.blocks.push_back({order, static_cast<Index>(layout.separators.size()), BlockKind::separator, 1, -1});
    for (Index node : layout.separators) {
      pos[idx(node)] = order++;
      rom.labels.push_back(node_label(sys, node));
    }
  }

  std::vector<Triplet> gt;
  std::vector<Triplet> ct;
  auto copy_outer = [&](const SparseMatrix& a, std::vector<Triplet>& out) {
    for (Index col = 0; col < m; ++col) {
      if (!engine.is_outer(col)) continue;
      for (SparseMatrix::InnerIterator it(a, col); it; ++it)
        if (engine.is_outer(it.row())) out.emplace_back(pos[idx(it.row())], pos[idx(col)], it.value());
    }
  };
  copy_outer(engine.g(), gt);
  copy_outer(engine.c(), ct);

  for (std::size_t li = 0; li < leaves.size(); ++li) {
    const Leaf& leaf = leaves[li];
    if (leaf.delta_g.size() == 0) continue;
    const Index w = static_cast<Index>(leaf.coupled.size());
    for (Index col = 0; col < w; ++col)
      for (Index row = 0; row < w; ++row) {
        const Index r = pos[idx(leaf.coupled[idx(row)])];
        const Index c = pos[idx(leaf.coupled[idx(col)])];
        if (leaf.delta_g(row, col) != 0.0) gt.emplace_back(r, c, leaf.delta_g(row, col));
        if (leaf.delta_c(row, col) != 0.0) ct.emplace_back(r, c, leaf.delta_c(row, col));
      }
    for (std::size_t j = 0; j < leaf.c11.size(); ++j) {
      const Index off = block_offset[li][j];
      const DenseMatrix& c11 = leaf.c11[j];
      const DenseMatrix& r = leaf.r[j];
      for (Index k = 0; k < c11.rows(); ++k) gt.emplace_back(off + k, off + k, 1.0);
      for (Index col = 0; col < c11.cols(); ++col)
        for (Index row = 0; row < c11.rows(); ++row)
          if (c11(row, col) != 0.0) ct.emplace_back(off + row, off + col, c11(row, col));
      for (Index col = 0; col < r.cols(); ++col) {
        const Index target = j == 0 ? pos[idx(leaf.coupled[idx(col)])] : block_offset[li][j - 1] + col;
        for (Index row = 0; row <= std::min(col, r.rows() - 1); ++row) {
          const double v = -r(row, col);
          if (v == 0.0) continue;
          ct.emplace_back(off + row, target, v);
          ct.emplace_back(target, off + row, v);
        }
      }
    }
  }

  rom.g.resize(order, order);
  rom.g.setFromTriplets(gt.begin(), gt.end());
  rom.g = pruned(rom.g);
  rom.c.resize(order, order);
  rom.c.setFromTriplets(ct.begin(), ct.end());
  rom.c = pruned(rom.c);

  std::vector<Triplet> bt;
  const auto ports = port_rows(sys.b);
  for (std::size_t k = 0; k < ports.size(); ++k) bt.emplace_back(pos[idx(ports[k])], static_cast<Index>(k), 1.0);
  rom.b.resize(order, p);
  rom.b.setFromTriplets(bt.begin(), bt.end());

  Index outer_rows = 0;
  for (const BlockInfo& blk : rom.blocks)
    if (blk.kind != BlockKind::iteration) outer_rows += blk.width;
  rom.p_eff = outer_rows;
  rom.truncated = report.truncated;
  for (const Leaf& leaf : leaves) {
    for (Index node : leaf.promoted) rom.promoted.push_back(node_label(sys, node));
    for (const IterationStats& s : leaf.stats) report.iterations.push_back(s);
  }
  report.promoted = rom.promoted;
  report.promoted_row_count = static_cast<Index>(rom.promoted.size());
  report.timings["assembly"] = seconds_since(t_asm);
  report.timings["total"] = seconds_since(t_start);
  return {std::move(rom), std::move(report)};
}

std::pair<ReducedModel, ReductionReport> turbomor_reduce(const DescriptorSystem& sys, int q,
                                                         const ReductionOptions& options) {
  if (q < 1) throw InputError("q must be at least 1");
  ReductionLayout layout;
  LeafSpec leaf;
  leaf.owned_outer = port_rows(sys.b);
  std::vector<char> is_port(idx(sys.order()), 0);
  for (Index node : leaf.owned_outer) {
    if (node < 0 || node >= sys.order() || is_port[idx(node)])
      throw InputError("B must select distinct rows");
    is_port[idx(node)] = 1;
  }
  for (Index i = 0; i < sys.order(); ++i)
    if (!is_port[idx(i)]) leaf.interior.push_back(i);
  layout.leaves.push_back(std::move(leaf));
  return reduce_with_layout(sys, q, layout, options);
}

}  // namespace turbomor
