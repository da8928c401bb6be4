// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include "turbomor/reduce/export.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "turbomor/ingest/bundle.hpp"
#include "turbomor/ingest/matrix_market.hpp"

namespace turbomor {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool is_selector(const SparseMatrix& b) {
  std::vector<char> used(static_cast<std::size_t>(b.rows()), 0);
  for (Index j = 0; j < b.outerSize(); ++j) {
    Index count = 0;
    for (SparseMatrix::InnerIterator it(b, j); it; ++it) {
      if (it.value() == 0.0) continue;
      if (it.value() != 1.0 || used[static_cast<std::size_t>(it.row())]) return false;
      used[static_cast<std::size_t>(it.row())] = 1;
      ++count;
    }
    if (count != 1) return false;
  }
  return true;
}

}  // namespace

void export_rom_bundle(const ReducedModel& rom, const std::string& dir) {
  fs::create_directories(dir);
  BundlePaths paths = BundlePaths::in_directory(dir, "rom");
  write_matrix_market_file(paths.g, rom.g, MarketSymmetry::symmetric);
  write_matrix_market_file(paths.c, rom.c, MarketSymmetry::symmetric);
  write_matrix_market_file(paths.b, rom.b, MarketSymmetry::general);

  json meta;
  meta["schema_version"] = kRomSchemaVersion;
  meta["method"] = rom.method;
  meta["q"] = rom.q;
  meta["m"] = rom.order();
  meta["p"] = rom.p;
  meta["p_eff"] = rom.p_eff;
  meta["order"] = rom.order();
  meta["dense"] = rom.dense;
  meta["truncated"] = rom.truncated;
  json blocks = json::array();
  for (const BlockInfo& blk : rom.blocks)
    blocks.push_back({{"offset", blk.offset},
                      {"width", blk.width},
                      {"kind", to_string(blk.kind)},
                      {"iteration", blk.iteration},
                      {"partition", blk.partition}});
  meta["blocks"] = blocks;
  meta["promoted"] = rom.promoted;
  std::vector<std::string> labels = rom.labels;
  if (labels.empty())
    for (Index i = 0; i < rom.order(); ++i) labels.push_back(std::to_string(i + 1));
  meta["labels"] = labels;
  if (is_selector(rom.b)) {
    std::vector<std::string> ports;
    for (Index j = 0; j < rom.b.outerSize(); ++j)
      for (SparseMatrix::InnerIterator it(rom.b, j); it; ++it)
        if (it.value() != 0.0) ports.push_back(labels[static_cast<std::size_t>(it.row())]);
    meta["ports"] = ports;
  }
  std::ofstream out(paths.sidecar);
  if (!out) throw InputError("cannot write '" + paths.sidecar + "'");
  out << meta.dump(2) << "\n";
}

Netlist rom_to_netlist(const ReducedModel& rom) {
  if (!is_selector(rom.b))
    throw InputError("netlist export needs a port selector B; this model (" + rom.method +
                     ") has a general input matrix");
  std::vector<std::string> labels = rom.labels;
  if (labels.empty())
    for (Index i = 0; i < rom.order(); ++i) labels.push_back("n" + std::to_string(i + 1));
  return unstamp(rom.g, rom.c, rom.b, labels);
}

std::string export_rom_netlist_text(const ReducedModel& rom) {
  Netlist net = rom_to_netlist(rom);
  bool negative = false;
  for (const Element& e : net.elements) negative = negative || e.value < 0.0;
  std::vector<std::string> header = {
      "reduced model: method " + rom.method + ", q " + std::to_string(rom.q) + ", order " +
          std::to_string(rom.order()) + ", ports " + std::to_string(rom.p)};
  header.push_back(negative ? "negative-values: yes (parse with negative values allowed)"
                            : "negative-values: no");
  return format_netlist(net, header);
}

void export_rom(const ReducedModel& rom, RomFormat format, const std::string& path) {
  if (format == RomFormat::bundle) {
    export_rom_bundle(rom, path);
    return;
  }
  const std::string text = export_rom_netlist_text(rom);
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

ReducedModel load_rom(const std::string& dir) {
  BundlePaths paths = BundlePaths::in_directory(dir, "rom");
  BundleOptions options;
  options.require_selector = false;
  options.canonicalize = false;
  DescriptorSystem sys = load_matrix_bundle(paths, options);

  ReducedModel rom;
  rom.g = std::move(sys.g);
  rom.c = std::move(sys.c);
  rom.b = std::move(sys.b);
  rom.labels = std::move(sys.node_labels);
  rom.p = rom.b.cols();
  rom.p_eff = rom.p;
  rom.method = "unknown";

  std::ifstream in(paths.sidecar);
  if (!in) return rom;
  json meta;
  try {
    in >> meta;
    rom.method = meta.value("method", std::string("unknown"));
    rom.q = meta.value("q", 0);
    rom.p_eff = meta.value("p_eff", rom.p);
    rom.dense = meta.value("dense", false);
    rom.truncated = meta.value("truncated", false);
    if (meta.contains("promoted")) rom.promoted = meta["promoted"].get<std::vector<std::string>>();
    if (meta.contains("blocks"))
      for (const json& blk : meta["blocks"])
        rom.blocks.push_back({blk.at("offset").get<Index>(), blk.at("width").get<Index>(),
                              block_kind_from_string(blk.at("kind").get<std::string>()),
                              blk.at("iteration").get<int>(), blk.at("partition").get<int>()});
  } catch (const json::exception& e) {
    throw InputError(paths.sidecar + ": " + e.what());
  }
  return rom;
}

}  // namespace turbomor
