// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>
#include <unordered_map>

#include "turbomor/ingest/descriptor.hpp"

namespace turbomor {

void validate(const DescriptorSystem& sys, double symmetry_tolerance) {
  const Index m = sys.g.rows();
  if (sys.g.cols() != m || sys.c.rows() != m || sys.c.cols() != m)
    throw DimensionMismatch("G and C must be square matrices of the same order");
  if (sys.b.rows() != m)
    throw DimensionMismatch("B has " + std::to_string(sys.b.rows()) + " rows, expected " +
                            std::to_string(m));
  if (!sys.node_labels.empty() && static_cast<Index>(sys.node_labels.size()) != m)
    throw DimensionMismatch("node label count does not match the system order");
  auto check_sym = [&](const SparseMatrix& a, const char* name) {
    double scale = 0.0;
    for (Index k = 0; k < a.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(a, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
    if (max_asymmetry(a) > symmetry_tolerance * scale)
      throw InputError(std::string(name) + " is not symmetric");
  };
  check_sym(sys.g, "G");
  check_sym(sys.c, "C");
  std::vector<char> used(static_cast<std::size_t>(m), 0);
  for (Index j = 0; j < sys.b.outerSize(); ++j) {
    Index count = 0;
    for (SparseMatrix::InnerIterator it(sys.b, j); it; ++it) {
      if (it.value() == 0.0) continue;
      if (it.value() != 1.0 || ++count > 1)
        throw InputError("B column " + std::to_string(j + 1) +
                         " must contain exactly one unit entry");
      if (used[static_cast<std::size_t>(it.row())])
        throw InputError("B columns select the same row " + std::to_string(it.row() + 1));
      used[static_cast<std::size_t>(it.row())] = 1;
    }
    if (count != 1)
      throw InputError("B column " + std::to_string(j + 1) + " must contain exactly one unit entry");
  }
}

bool is_canonical(const DescriptorSystem& sys) {
  for (Index j = 0; j < sys.b.outerSize(); ++j) {
    Index count = 0;
    for (SparseMatrix::InnerIterator it(sys.b, j); it; ++it) {
      if (it.value() == 0.0) continue;
      if (it.row() != j || it.value() != 1.0) return false;
      ++count;
    }
    if (count != 1) return false;
  }
  return true;
}

SparseMatrix permute_symmetric(const SparseMatrix& a, const std::vector<Index>& order) {
  const Index n = static_cast<Index>(order.size());
  std::vector<Index> inverse(static_cast<std::size_t>(a.rows()), -1);
  for (Index k = 0; k < n; ++k) inverse[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = k;
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(a.nonZeros()));
  for (Index col = 0; col < a.outerSize(); ++col) {
    Index nc = inverse[static_cast<std::size_t>(col)];
    if (nc < 0) continue;
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      Index nr = inverse[static_cast<std::size_t>(it.row())];
      if (nr >= 0) trips.emplace_back(nr, nc, it.value());
    }
  }
  SparseMatrix out(n, n);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SparseMatrix permute_rows(const SparseMatrix& a, const std::vector<Index>& order) {
  const Index n = static_cast<Index>(order.size());
  std::vector<Index> inverse(static_cast<std::size_t>(a.rows()), -1);
  for (Index k = 0; k < n; ++k) inverse[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = k;
  std::vector<Triplet> trips;
  for (Index col = 0; col < a.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      Index nr = inverse[static_cast<std::size_t>(it.row())];
      if (nr >= 0) trips.emplace_back(nr, col, it.value());
    }
  SparseMatrix out(n, a.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

DescriptorSystem canonicalize(const DescriptorSystem& sys) {
  validate(sys, std::numeric_limits<double>::infinity());
  const Index m = sys.order();
  std::vector<Index> order;
  std::vector<char> is_port(static_cast<std::size_t>(m), 0);
  for (Index j = 0; j < sys.b.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(sys.b, j); it; ++it)
      if (it.value() != 0.0) {
        order.push_back(it.row());
        is_port[static_cast<std::size_t>(it.row())] = 1;
      }
  for (Index i = 0; i < m; ++i)
    if (!is_port[static_cast<std::size_t>(i)]) order.push_back(i);

  DescriptorSystem out;
  out.g = permute_symmetric(sys.g, order);
  out.c = permute_symmetric(sys.c, order);
  out.b = permute_rows(sys.b, order);
  out.b.makeCompressed();
  if (!sys.node_labels.empty()) {
    out.node_labels.reserve(order.size());
    for (Index i : order) out.node_labels.push_back(sys.node_labels[static_cast<std::size_t>(i)]);
  }
  return out;
}

DescriptorSystem stamp(const Netlist& net, std::vector<std::string>* warnings) {
  std::unordered_map<std::string, Index> index;
  std::vector<std::string> labels;
  auto intern = [&](const std::string& node) {
    if (node == Netlist::ground) return;
    if (index.emplace(node, static_cast<Index>(labels.size())).second) labels.push_back(node);
  };
  for (const auto& p : net.ports) intern(p.node);
  for (const auto& e : net.elements) {
    intern(e.node_a);
    intern(e.node_b);
  }
  const Index m = static_cast<Index>(labels.size());

  std::vector<Triplet> gt, ct;
  for (const auto& e : net.elements) {
    double v = e.kind == ElementKind::resistor ? 1.0 / e.value : e.value;
    auto& trips = e.kind == ElementKind::resistor ? gt : ct;
    const bool a_gnd = e.node_a == Netlist::ground;
    const bool b_gnd = e.node_b == Netlist::ground;
    Index a = a_gnd ? -1 : index.at(e.node_a);
    Index b = b_gnd ? -1 : index.at(e.node_b);
    if (a >= 0) trips.emplace_back(a, a, v);
    if (b >= 0) trips.emplace_back(b, b, v);
    if (a >= 0 && b >= 0) {
      trips.emplace_back(a, b, -v);
      trips.emplace_back(b, a, -v);
    }
  }
  DescriptorSystem sys;
  sys.g.resize(m, m);
  sys.g.setFromTriplets(gt.begin(), gt.end());
  sys.c.resize(m, m);
  sys.c.setFromTriplets(ct.begin(), ct.end());
  sys.g = pruned(sys.g);
  sys.c = pruned(sys.c);

  std::vector<Triplet> bt;
  for (std::size_t k = 0; k < net.ports.size(); ++k)
    bt.emplace_back(index.at(net.ports[k].node), static_cast<Index>(k), 1.0);
  sys.b.resize(m, static_cast<Index>(net.ports.size()));
  sys.b.setFromTriplets(bt.begin(), bt.end());
  sys.node_labels = std::move(labels);

  if (warnings) {
    DenseVector row_mass = DenseVector::Zero(m);
    for (Index k = 0; k < m; ++k) {
      for (SparseMatrix::InnerIterator it(sys.g, k); it; ++it) row_mass[it.row()] += std::abs(it.value());
      for (SparseMatrix::InnerIterator it(sys.c, k); it; ++it) row_mass[it.row()] += std::abs(it.value());
    }
    for (Index i = 0; i < m; ++i)
      if (row_mass[i] == 0.0)
        warnings->push_back("node '" + sys.node_labels[static_cast<std::size_t>(i)] +
                            "' has an all-zero row in G + C");
  }
  return sys;
}

Netlist unstamp(const SparseMatrix& g, const SparseMatrix& c, const SparseMatrix& b,
                const std::vector<std::string>& node_labels) {
  const Index n = g.rows();
  if (g.cols() != n || c.rows() != n || c.cols() != n || b.rows() != n)
    throw DimensionMismatch("unstamp: inconsistent matrix dimensions");
  if (static_cast<Index>(node_labels.size()) != n)
    throw DimensionMismatch("unstamp: node label count does not match the order");

  Netlist net;
  int r_count = 0;
  int c_count = 0;
  auto emit = [&](ElementKind kind, Index a, Index bnode, double admittance) {
    Element e;
    e.kind = kind;
    if (kind == ElementKind::resistor) {
      e.name = "r" + std::to_string(++r_count);
      e.value = 1.0 / admittance;
    } else {
      e.name = "c" + std::to_string(++c_count);
      e.value = admittance;
    }
    e.node_a = node_labels[static_cast<std::size_t>(a)];
    e.node_b = bnode < 0 ? std::string(Netlist::ground) : node_labels[static_cast<std::size_t>(bnode)];
    net.elements.push_back(std::move(e));
  };

  // Symmetric input: column j lists the partners of node j. Emitting pairs
  // (a, j) with a < j in column order keeps first appearance close to index order.
  const SparseMatrix& gs = g;
  const SparseMatrix& cs = c;
  auto residue = [](const SparseMatrix& a, Index j, double& diag) {
    double sum = 0.0;
    double mass = 0.0;
    diag = 0.0;
    for (SparseMatrix::InnerIterator it(a, j); it; ++it) {
      sum += it.value();
      mass += std::abs(it.value());
      if (it.row() == j) diag = it.value();
    }
    return std::abs(sum) <= 64.0 * std::numeric_limits<double>::epsilon() * mass ? 0.0 : sum;
  };
  for (Index j = 0; j < n; ++j) {
    double diag = 0.0;
    double rg = residue(gs, j, diag);
    if (rg != 0.0) emit(ElementKind::resistor, j, -1, rg);
    double rc = residue(cs, j, diag);
    if (rc != 0.0) emit(ElementKind::capacitor, j, -1, rc);
    for (SparseMatrix::InnerIterator it(gs, j); it; ++it)
      if (it.row() < j && it.value() != 0.0) emit(ElementKind::resistor, it.row(), j, -it.value());
    for (SparseMatrix::InnerIterator it(cs, j); it; ++it)
      if (it.row() < j && it.value() != 0.0) emit(ElementKind::capacitor, it.row(), j, -it.value());
  }
  for (Index k = 0; k < b.outerSize(); ++k) {
    Index count = 0;
    for (SparseMatrix::InnerIterator it(b, k); it; ++it) {
      if (it.value() == 0.0) continue;
      if (it.value() != 1.0 || ++count > 1)
        throw InputError("unstamp: B is not a port selector; cannot express it as a netlist");
      net.ports.push_back({"p" + std::to_string(k + 1), node_labels[static_cast<std::size_t>(it.row())]});
    }
    if (count != 1) throw InputError("unstamp: B is not a port selector; cannot express it as a netlist");
  }
  return net;
}

}  // namespace turbomor
