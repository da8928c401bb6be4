// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include "turbomor/partition/nested_dissection.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace turbomor {

namespace {

auto idx(Index i) { return static_cast<std::size_t>(i); }

class Dissector {
 public:
  Dissector(const SparseMatrix& adjacency, Index leaf_size)
      : adj_(adjacency), leaf_size_(std::max<Index>(leaf_size, 1)) {
    const auto n = idx(adj_.rows());
    member_.assign(n, 0);
    level_.assign(n, -1);
    visit_.assign(n, 0);
  }

  PartitionTree run() {
    PartitionTree tree;
    tree.order = adj_.rows();
    tree.leaf_size_target = leaf_size_;
    std::vector<Index> all(idx(adj_.rows()));
    for (Index i = 0; i < adj_.rows(); ++i) all[idx(i)] = i;
    tree_ = &tree;
    tree.root = split(std::move(all));
    return tree;
  }

 private:
  int add(PartitionNode node) {
    tree_->nodes.push_back(std::move(node));
    return static_cast<int>(tree_->nodes.size()) - 1;
  }

  int make_leaf(std::vector<Index> set) {
    PartitionNode leaf;
    std::sort(set.begin(), set.end());
    leaf.leaf = std::move(set);
    return add(std::move(leaf));
  }

  void enter(const std::vector<Index>& set) {
    ++stamp_;
    for (Index v : set) member_[idx(v)] = stamp_;
  }
  bool inside(Index v) const { return member_[idx(v)] == stamp_; }

  // Breadth-first level sets from `start` within the current set.
  std::vector<std::vector<Index>> levels_from(Index start) {
    ++visit_stamp_;
    std::vector<std::vector<Index>> levels{{start}};
    visit_[idx(start)] = visit_stamp_;
    level_[idx(start)] = 0;
    while (true) {
      std::vector<Index> next;
      for (Index v : levels.back())
        for (SparseMatrix::InnerIterator it(adj_, v); it; ++it) {
          const Index u = it.row();
          if (!inside(u) || visit_[idx(u)] == visit_stamp_) continue;
          visit_[idx(u)] = visit_stamp_;
          level_[idx(u)] = static_cast<Index>(levels.size());
          next.push_back(u);
        }
      if (next.empty()) break;
      levels.push_back(std::move(next));
    }
    return levels;
  }

  Index degree_in_set(Index v) const {
    Index d = 0;
    for (SparseMatrix::InnerIterator it(adj_, v); it; ++it)
      if (inside(it.row())) ++d;
    return d;
  }

  std::vector<std::vector<Index>> components(const std::vector<Index>& set) {
    std::vector<std::vector<Index>> out;
    ++visit_stamp_;
    for (Index s : set) {
      if (visit_[idx(s)] == visit_stamp_) continue;
      std::vector<Index> comp{s};
      visit_[idx(s)] = visit_stamp_;
      for (std::size_t head = 0; head < comp.size(); ++head)
        for (SparseMatrix::InnerIterator it(adj_, comp[head]); it; ++it) {
          const Index u = it.row();
          if (inside(u) && visit_[idx(u)] != visit_stamp_) {
            visit_[idx(u)] = visit_stamp_;
            comp.push_back(u);
          }
        }
      out.push_back(std::move(comp));
    }
    return out;
  }

  int split(std::vector<Index> set) {
    const auto size = static_cast<Index>(set.size());
    if (size <= leaf_size_) return make_leaf(std::move(set));
    enter(set);

    auto comps = components(set);
    if (comps.size() > 1) {
      std::sort(comps.begin(), comps.end(),
                [](const auto& a, const auto& b) { return a.size() > b.size(); });
      std::vector<Index> a;
      std::vector<Index> b;
      for (auto& comp : comps) {
        auto& target = a.size() <= b.size() ? a : b;
        target.insert(target.end(), comp.begin(), comp.end());
      }
      PartitionNode node;
      const int left = split(std::move(a));
      const int right = split(std::move(b));
      node.children = {left, right};
      return add(std::move(node));
    }

    // Pseudo-peripheral start vertex.
    Index start = set.front();
    for (Index v : set)
      if (degree_in_set(v) < degree_in_set(start)) start = v;
    auto levels = levels_from(start);
    for (int pass = 0; pass < 8; ++pass) {
      Index best = levels.back().front();
      for (Index v : levels.back())
        if (degree_in_set(v) < degree_in_set(best)) best = v;
      auto trial = levels_from(best);
      if (trial.size() <= levels.size()) {
        levels = levels_from(start);
        break;
      }
      start = best;
      levels = std::move(trial);
    }

    const auto depth = static_cast<Index>(levels.size());
    if (depth < 3) return make_leaf(std::move(set));
    Index median = 1;
    Index below = 0;
    for (Index l = 0; l < depth; ++l) {
      if (2 * (below + static_cast<Index>(levels[idx(l)].size())) >= size) {
        median = l;
        break;
      }
      below += static_cast<Index>(levels[idx(l)].size());
    }
    median = std::clamp<Index>(median, 1, depth - 2);

    std::vector<Index> a;
    std::vector<Index> b;
    std::vector<Index> sep;
    for (Index l = 0; l < depth; ++l) {
      auto& target = l < median ? a : b;
      if (l == median) continue;
      target.insert(target.end(), levels[idx(l)].begin(), levels[idx(l)].end());
    }
    // Separator vertices without a neighbour beyond the median level are
    // not needed to cut the two sides apart.
    for (Index v : levels[idx(median)]) {
      bool touches_far_side = false;
      for (SparseMatrix::InnerIterator it(adj_, v); it; ++it)
        if (inside(it.row()) && level_[idx(it.row())] == median + 1) {
          touches_far_side = true;
          break;
        }
      (touches_far_side ? sep : a).push_back(v);
    }
    if (2 * static_cast<Index>(sep.size()) > size || a.empty() || b.empty())
      return make_leaf(std::move(set));

    PartitionNode node;
    std::sort(sep.begin(), sep.end());
    node.separator = std::move(sep);
    const int left = split(std::move(a));
    const int right = split(std::move(b));
    node.children = {left, right};
    return add(std::move(node));
  }

  const SparseMatrix& adj_;
  Index leaf_size_;
  PartitionTree* tree_ = nullptr;
  std::vector<Index> member_;
  Index stamp_ = 0;
  std::vector<Index> level_;
  std::vector<Index> visit_;
  Index visit_stamp_ = 0;
};

void collect(const PartitionTree& tree, int node, std::vector<std::vector<Index>>* leaves,
             std::vector<Index>* seps) {
  const PartitionNode& n = tree.nodes[static_cast<std::size_t>(node)];
  if (n.is_leaf()) {
    if (leaves) leaves->push_back(n.leaf);
    return;
  }
  for (int child : n.children) collect(tree, child, leaves, seps);
  if (seps) seps->insert(seps->end(), n.separator.begin(), n.separator.end());
}

}  // namespace

std::vector<std::vector<Index>> PartitionTree::leaves() const {
  std::vector<std::vector<Index>> out;
  if (root >= 0) collect(*this, root, &out, nullptr);
  return out;
}

std::vector<Index> PartitionTree::separators() const {
  std::vector<Index> out;
  if (root >= 0) collect(*this, root, nullptr, &out);
  return out;
}

SparseMatrix adjacency_pattern(const DescriptorSystem& sys) {
  SparseMatrix sum = sys.g.cwiseAbs() + sys.c.cwiseAbs();
  SparseMatrix t = sum.transpose();
  SparseMatrix sym = sum + t;
  std::vector<Triplet> trips;
  for (Index k = 0; k < sym.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(sym, k); it; ++it)
      if (it.row() != k && it.value() != 0.0) trips.emplace_back(it.row(), k, 1.0);
  SparseMatrix out(sym.rows(), sym.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

PartitionTree nested_dissection(const SparseMatrix& adjacency, Index leaf_size) {
  if (adjacency.rows() != adjacency.cols()) throw DimensionMismatch("adjacency must be square");
  Dissector d(adjacency, leaf_size);
  return d.run();
}

PartitionTree nested_dissection(const DescriptorSystem& sys, Index leaf_size) {
  return nested_dissection(adjacency_pattern(sys), leaf_size);
}

void validate_partition(const PartitionTree& tree, const SparseMatrix& adjacency) {
  const Index n = adjacency.rows();
  if (tree.order != n) throw InputError("partition covers " + std::to_string(tree.order) +
                                        " nodes, system has " + std::to_string(n));
  std::vector<int> owner(idx(n), -2);
  const auto leaves = tree.leaves();
  for (std::size_t l = 0; l < leaves.size(); ++l)
    for (Index v : leaves[l]) {
      if (v < 0 || v >= n) throw InputError("partition references a node outside the system");
      if (owner[idx(v)] != -2) throw InputError("node " + std::to_string(v + 1) + " appears twice in the partition");
      owner[idx(v)] = static_cast<int>(l);
    }
  for (Index v : tree.separators()) {
    if (v < 0 || v >= n) throw InputError("partition references a node outside the system");
    if (owner[idx(v)] != -2) throw InputError("node " + std::to_string(v + 1) + " appears twice in the partition");
    owner[idx(v)] = -1;
  }
  for (Index v = 0; v < n; ++v)
    if (owner[idx(v)] == -2) throw InputError("node " + std::to_string(v + 1) + " is missing from the partition");
  for (Index k = 0; k < adjacency.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(adjacency, k); it; ++it) {
      const int a = owner[idx(it.row())];
      const int b = owner[idx(k)];
      if (a >= 0 && b >= 0 && a != b)
        throw InputError("edge between nodes " + std::to_string(it.row() + 1) + " and " +
                         std::to_string(k + 1) + " joins two leaves without a separator");
    }
}

PartitionTree partition_from_permutation(const std::string& text,
                                         const std::vector<std::string>& node_labels) {
  std::unordered_map<std::string, Index> index;
  for (std::size_t i = 0; i < node_labels.size(); ++i) index.emplace(node_labels[i], static_cast<Index>(i));

  PartitionTree tree;
  tree.order = static_cast<Index>(node_labels.size());
  PartitionNode root;
  std::vector<Index> current;
  bool separators = false;
  auto close_leaf = [&] {
    if (current.empty()) return;
    PartitionNode leaf;
    leaf.leaf = std::move(current);
    current.clear();
    tree.nodes.push_back(std::move(leaf));
    root.children.push_back(static_cast<int>(tree.nodes.size()) - 1);
  };

  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    if (token == "|") {
      if (separators) throw InputError("permutation: '|' after 'sep:'");
      close_leaf();
      continue;
    }
    if (token == "sep:") {
      close_leaf();
      separators = true;
      continue;
    }
    auto it = index.find(token);
    if (it == index.end()) throw InputError("permutation: unknown node '" + token + "'");
    (separators ? root.separator : current).push_back(it->second);
  }
  close_leaf();
  if (root.children.empty()) throw InputError("permutation: no leaves listed");
  tree.nodes.push_back(std::move(root));
  tree.root = static_cast<int>(tree.nodes.size()) - 1;
  return tree;
}

PartitionTree read_permutation_file(const std::string& path, const std::vector<std::string>& node_labels) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open permutation file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return partition_from_permutation(buffer.str(), node_labels);
}

std::string format_permutation(const PartitionTree& tree, const std::vector<std::string>& node_labels) {
  std::ostringstream out;
  const auto leaves = tree.leaves();
  for (std::size_t l = 0; l < leaves.size(); ++l) {
    for (Index v : leaves[l]) out << node_labels[idx(v)] << ' ';
    out << "|\n";
  }
  out << "sep:";
  for (Index v : tree.separators()) out << ' ' << node_labels[idx(v)];
  out << '\n';
  return out.str();
}

}  // namespace turbomor
