// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include "turbomor/ingest/bundle.hpp"

#include <filesystem>
#include <fstream>
#include <unordered_map>

#include "json.hpp"
#include "turbomor/ingest/matrix_market.hpp"

namespace turbomor {

namespace fs = std::filesystem;
using nlohmann::json;

BundlePaths BundlePaths::in_directory(const std::string& dir, const std::string& prefix) {
  const std::string stem = prefix.empty() ? "" : prefix + ".";
  BundlePaths p;
  p.g = (fs::path(dir) / (stem + "G.mtx")).string();
  p.c = (fs::path(dir) / (stem + "C.mtx")).string();
  p.b = (fs::path(dir) / (stem + "B.mtx")).string();
  p.sidecar = (fs::path(dir) / (prefix.empty() ? "system.json" : prefix + ".json")).string();
  return p;
}

BundlePaths BundlePaths::discover(const std::string& dir) {
  if (!fs::is_directory(dir)) throw InputError("bundle directory '" + dir + "' does not exist");
  for (const char* prefix : {"sys", "rom", ""}) {
    BundlePaths p = in_directory(dir, prefix);
    if (fs::exists(p.g) && fs::exists(p.c) && fs::exists(p.b)) return p;
  }
  throw InputError("no G/C/B Matrix Market triple found in '" + dir + "'");
}

DescriptorSystem load_matrix_bundle(const BundlePaths& paths, const BundleOptions& options) {
  MarketMatrix g = read_matrix_market_file(paths.g);
  MarketMatrix c = read_matrix_market_file(paths.c);
  MarketMatrix b = read_matrix_market_file(paths.b);

  const Index m = g.matrix.rows();
  if (g.matrix.cols() != m) throw DimensionMismatch(paths.g + ": G is not square");
  if (c.matrix.rows() != m || c.matrix.cols() != m)
    throw DimensionMismatch("C is " + std::to_string(c.matrix.rows()) + "x" +
                            std::to_string(c.matrix.cols()) + ", expected " + std::to_string(m) +
                            "x" + std::to_string(m));
  if (b.matrix.rows() != m)
    throw DimensionMismatch("B has " + std::to_string(b.matrix.rows()) + " rows, expected " +
                            std::to_string(m));

  DescriptorSystem sys;
  sys.g = std::move(g.matrix);
  sys.c = std::move(c.matrix);
  sys.b = std::move(b.matrix);
  for (Index i = 0; i < m; ++i) sys.node_labels.push_back(std::to_string(i + 1));

  if (!paths.sidecar.empty() && fs::exists(paths.sidecar)) {
    std::ifstream in(paths.sidecar);
    if (!in) throw InputError("cannot open sidecar '" + paths.sidecar + "'");
    json meta;
    try {
      in >> meta;
    } catch (const json::exception& e) {
      throw InputError(paths.sidecar + ": " + e.what());
    }
    if (meta.contains("m") && meta["m"].get<Index>() != m)
      throw DimensionMismatch(paths.sidecar + ": m = " + std::to_string(meta["m"].get<Index>()) +
                              " but matrices have order " + std::to_string(m));
    if (meta.contains("labels")) {
      auto labels = meta["labels"].get<std::vector<std::string>>();
      if (static_cast<Index>(labels.size()) != m)
        throw DimensionMismatch(paths.sidecar + ": label count does not match the order");
      sys.node_labels = std::move(labels);
    }
    if (meta.contains("ports")) {
      std::unordered_map<std::string, Index> index;
      for (Index i = 0; i < m; ++i) index.emplace(sys.node_labels[static_cast<std::size_t>(i)], i);
      auto ports = meta["ports"].get<std::vector<std::string>>();
      std::vector<Triplet> trips;
      for (std::size_t k = 0; k < ports.size(); ++k) {
        auto it = index.find(ports[k]);
        if (it == index.end())
          throw InputError(paths.sidecar + ": unknown port node '" + ports[k] + "'");
        trips.emplace_back(it->second, static_cast<Index>(k), 1.0);
      }
      sys.b.resize(m, static_cast<Index>(ports.size()));
      sys.b.setFromTriplets(trips.begin(), trips.end());
    }
    if (meta.contains("p") && meta["p"].get<Index>() != sys.b.cols())
      throw DimensionMismatch(paths.sidecar + ": p does not match the number of B columns");
  }

  if (options.require_selector) {
    validate(sys, 0.0);
    if (options.canonicalize && !is_canonical(sys)) sys = canonicalize(sys);
  } else {
    DescriptorSystem probe = sys;
    probe.b.resize(m, 0);
    validate(probe, 0.0);
  }
  return sys;
}

void write_matrix_bundle(const BundlePaths& paths, const DescriptorSystem& sys) {
  write_matrix_market_file(paths.g, sys.g, MarketSymmetry::symmetric);
  write_matrix_market_file(paths.c, sys.c, MarketSymmetry::symmetric);
  write_matrix_market_file(paths.b, sys.b, MarketSymmetry::general);
  if (paths.sidecar.empty()) return;
  json meta;
  meta["m"] = sys.order();
  meta["p"] = sys.port_count();
  std::vector<std::string> labels = sys.node_labels;
  if (labels.empty())
    for (Index i = 0; i < sys.order(); ++i) labels.push_back(std::to_string(i + 1));
  std::vector<std::string> ports;
  for (Index j = 0; j < sys.b.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(sys.b, j); it; ++it)
      if (it.value() != 0.0) ports.push_back(labels[static_cast<std::size_t>(it.row())]);
  if (static_cast<Index>(ports.size()) == sys.port_count()) meta["ports"] = ports;
  meta["labels"] = labels;
  std::ofstream out(paths.sidecar);
  if (!out) throw InputError("cannot write '" + paths.sidecar + "'");
  out << meta.dump(2) << "\n";
}

}  // namespace turbomor
