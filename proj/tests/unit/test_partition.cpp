// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>

#include "support/oracles.hpp"
#include "support/structure.hpp"
#include "turbomor/analysis/passivity.hpp"
#include "turbomor/partition/nested_dissection.hpp"
#include "turbomor/partition/partitioned_reduce.hpp"

using namespace turbomor;
using namespace turbomor::testing;

namespace {

SparseMatrix path_adjacency(Index n) {
  std::vector<Triplet> t;
  for (Index i = 0; i + 1 < n; ++i) {
    t.emplace_back(i, i + 1, 1.0);
    t.emplace_back(i + 1, i, 1.0);
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

// Size of the largest connected component after deleting `removed`, by BFS.
Index largest_component_without(const SparseMatrix& adj, const std::set<Index>& removed) {
  const Index n = adj.rows();
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  Index largest = 0;
  for (Index s = 0; s < n; ++s) {
    if (removed.count(s) || seen[static_cast<std::size_t>(s)]) continue;
    Index size = 0;
    std::queue<Index> q;
    q.push(s);
    seen[static_cast<std::size_t>(s)] = 1;
    while (!q.empty()) {
      const Index v = q.front();
      q.pop();
      ++size;
      for (SparseMatrix::InnerIterator it(adj, v); it; ++it)
        if (!removed.count(it.row()) && !seen[static_cast<std::size_t>(it.row())]) {
          seen[static_cast<std::size_t>(it.row())] = 1;
          q.push(it.row());
        }
    }
    largest = std::max(largest, size);
  }
  return largest;
}

DescriptorSystem mesh_system(Index rows, Index cols, Index ports, std::uint64_t seed) {
  MeshOptions opt;
  opt.rows = rows;
  opt.cols = cols;
  opt.ports = ports;
  opt.pads = 4;
  opt.seed = seed;
  return stamp(generate_mesh(opt));
}

}  // namespace

TEST_SUITE("nested dissection") {
  TEST_CASE("path of nine nodes splits at the middle") {
    const SparseMatrix adj = path_adjacency(9);
    const PartitionTree tree = nested_dissection(adj, 4);
    const auto leaves = tree.leaves();
    const auto seps = tree.separators();
    REQUIRE(seps.size() == 1);
    CHECK(seps[0] == 4);
    REQUIRE(leaves.size() == 2);
    CHECK(leaves[0].size() == 4);
    CHECK(leaves[1].size() == 4);
    CHECK_NOTHROW(validate_partition(tree, adj));
    // Exhaustive oracle: the best single-vertex separator minimizes the
    // largest remaining component.
    Index best = -1, best_size = 10;
    for (Index v = 0; v < 9; ++v) {
      const Index size = largest_component_without(adj, {v});
      if (size < best_size) {
        best = v;
        best_size = size;
      }
    }
    CHECK(best_size == 4);
    CHECK(seps[0] == best);
  }

  TEST_CASE("complete graph stays a single leaf") {
    const Index n = 10;
    DenseMatrix a = DenseMatrix::Ones(n, n) - DenseMatrix::Identity(n, n);
    const SparseMatrix adj = a.sparseView();
    const PartitionTree tree = nested_dissection(adj, 3);
    CHECK(tree.leaves().size() == 1);
    CHECK(tree.separators().empty());
  }

  TEST_CASE("disconnected graph splits without a separator") {
    std::vector<Triplet> t;
    for (Index i = 0; i < 4; ++i) {
      t.emplace_back(i, (i + 1) % 5, 1.0);
      t.emplace_back((i + 1) % 5, i, 1.0);
      t.emplace_back(5 + i, 5 + (i + 1) % 5, 1.0);
      t.emplace_back(5 + (i + 1) % 5, 5 + i, 1.0);
    }
    SparseMatrix adj(10, 10);
    adj.setFromTriplets(t.begin(), t.end());
    const PartitionTree tree = nested_dissection(adj, 5);
    CHECK(tree.leaves().size() == 2);
    CHECK(tree.separators().empty());
    CHECK_NOTHROW(validate_partition(tree, adj));
  }

  TEST_CASE("separator validity on meshes") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const DescriptorSystem sys = mesh_system(12 + static_cast<Index>(seed), 15, 6, seed);
      const SparseMatrix adj = adjacency_pattern(sys);
      const PartitionTree tree = nested_dissection(sys, 40);
      CHECK_NOTHROW(validate_partition(tree, adj));
      CHECK(tree.leaves().size() >= 2);
      // Independent check: after removing separators, every component lies
      // inside a single leaf.
      const auto seps = tree.separators();
      std::set<Index> removed(seps.begin(), seps.end());
      std::vector<int> leaf_of(static_cast<std::size_t>(sys.order()), -1);
      const auto leaves = tree.leaves();
      Index covered = static_cast<Index>(seps.size());
      for (std::size_t l = 0; l < leaves.size(); ++l) {
        covered += static_cast<Index>(leaves[l].size());
        for (Index v : leaves[l]) leaf_of[static_cast<std::size_t>(v)] = static_cast<int>(l);
        CHECK(static_cast<Index>(leaves[l].size()) <= 40);
      }
      CHECK(covered == sys.order());
      for (Index col = 0; col < adj.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(adj, col); it; ++it) {
          if (removed.count(col) || removed.count(it.row())) continue;
          CHECK(leaf_of[static_cast<std::size_t>(col)] == leaf_of[static_cast<std::size_t>(it.row())]);
        }
    }
  }

  TEST_CASE("validate_partition rejects a bad tree") {
    const SparseMatrix adj = path_adjacency(5);
    PartitionTree tree;
    tree.order = 5;
    tree.nodes.resize(3);
    tree.root = 0;
    tree.nodes[0].children = {1, 2};
    tree.nodes[1].leaf = {0, 1, 2};
    tree.nodes[2].leaf = {3, 4};
    CHECK_THROWS_AS(validate_partition(tree, adj), InputError);
    tree.nodes[2].leaf = {4};
    tree.nodes[0].separator = {3};
    CHECK_NOTHROW(validate_partition(tree, adj));
  }
}

TEST_SUITE("permutation files") {
  TEST_CASE("tree built verbatim from a permutation") {
    const std::vector<std::string> labels{"a", "b", "c", "d", "e"};
    const PartitionTree tree = partition_from_permutation("a b | d e | sep: c", labels);
    const auto leaves = tree.leaves();
    REQUIRE(leaves.size() == 2);
    CHECK(leaves[0] == std::vector<Index>{0, 1});
    CHECK(leaves[1] == std::vector<Index>{3, 4});
    CHECK(tree.separators() == std::vector<Index>{2});
    CHECK_NOTHROW(validate_partition(tree, path_adjacency(5)));
    const PartitionTree again = partition_from_permutation(format_permutation(tree, labels), labels);
    CHECK(again.leaves() == leaves);
    CHECK(again.separators() == tree.separators());
  }

  TEST_CASE("unknown names and invalid separators are rejected") {
    const std::vector<std::string> labels{"a", "b", "c"};
    CHECK_THROWS_AS(partition_from_permutation("a b | zz", labels), InputError);
    const PartitionTree bad = partition_from_permutation("a | b c", labels);
    CHECK_THROWS_AS(validate_partition(bad, path_adjacency(3)), InputError);
  }

  TEST_CASE("file input drives reduce_partitioned") {
    const DescriptorSystem sys = mesh_system(6, 6, 3, 2);
    const PartitionTree nd = nested_dissection(sys, 12);
    const std::string path = temp_path("mesh.perm");
    {
      std::ofstream out(path);
      out << format_permutation(nd, sys.node_labels);
    }
    const PartitionTree tree = read_permutation_file(path, sys.node_labels);
    const auto [rom, report] = reduce_partitioned(sys, 2, tree);
    CHECK(relative_moment_error(oracle_moments(sys, 4), oracle_moments(rom, 4)) <= 1e-8);
  }
}

TEST_SUITE("reduce_partitioned") {
  TEST_CASE("single leaf is moment-equivalent to the plain reducer") {
    const RandomCase rc = random_case(17, 60, 3);
    const auto [part, rp] = reduce_partitioned(rc.sys, 2, rc.sys.order());
    const auto [plain, rq] = turbomor_reduce(rc.sys, 2);
    CHECK(rp.partitions == 1);
    const auto ref = oracle_moments(rc.sys, 4);
    CHECK(relative_moment_error(ref, oracle_moments(part, 4)) <= 1e-8);
    CHECK(relative_moment_error(ref, oracle_moments(plain, 4)) <= 1e-8);
  }

  TEST_CASE("disconnected subnets give a block diagonal model") {
    const DescriptorSystem sys = stamp(parse_netlist(
        "R1 a1 a2 1\nR2 a2 a3 2\nR3 a3 0 1\nC1 a2 0 1\nC2 a3 0 2\nC5 a3 a4 1\nR7 a4 0 3\n"
        "R4 b1 b2 1\nR5 b2 b3 3\nR6 b3 0 1\nC3 b2 0 1\nC4 b3 0 1\nC6 b3 b4 2\nR8 b4 0 1\n"
        "P1 a1\nP2 b1\n"));
    const SparseMatrix adj = adjacency_pattern(sys);
    const PartitionTree tree = nested_dissection(adj, 4);
    CHECK(tree.separators().empty());
    const auto [rom, report] = reduce_partitioned(sys, 2, tree);
    CHECK(check_partitioned_structure(rom).empty());
    CHECK(relative_moment_error(oracle_moments(sys, 4), oracle_moments(rom, 4)) <= 1e-10);
    // Each subnet on its own.
    const DescriptorSystem a = stamp(parse_netlist("R1 a1 a2 1\nR2 a2 a3 2\nR3 a3 0 1\nC1 a2 0 1\nC2 a3 0 2\nC5 a3 a4 1\nR7 a4 0 3\nP1 a1\n"));
    const auto [ra, rep] = turbomor_reduce(a, 2);
    const auto ma = oracle_moments(ra, 4);
    const auto mr = oracle_moments(rom, 4);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(mr[static_cast<std::size_t>(k)](0, 0) - ma[static_cast<std::size_t>(k)](0, 0)) <= 1e-10 * std::abs(ma[static_cast<std::size_t>(k)](0, 0)));
    CHECK(std::abs(mr[0](0, 1)) <= 1e-14);
  }

  TEST_CASE("port moments and zero blocks on meshes") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const DescriptorSystem sys = mesh_system(14, 14, 2 + static_cast<Index>(seed), seed);
      const auto [rom, report] = reduce_partitioned(sys, 2, 30);
      CAPTURE(seed);
      CHECK(report.partitions >= 2);
      CHECK(check_partitioned_structure(rom).empty());
      CHECK(relative_moment_error(oracle_moments(sys, 4), oracle_moments(rom, 4)) <= 1e-8);
      CHECK(passivity_check(rom).passed);
      CHECK(rom.method == "turbomor-partitioned");
    }
  }

  TEST_CASE("pass-through leaves are reported") {
    const DescriptorSystem sys = mesh_system(8, 8, 20, 3);
    const auto [rom, report] = reduce_partitioned(sys, 2, 6);
    CHECK(report.pass_through >= 1);
    CHECK_FALSE(report.notes.empty());
    CHECK(relative_moment_error(oracle_moments(sys, 4), oracle_moments(rom, 4)) <= 1e-8);
  }
}
