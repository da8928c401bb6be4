// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "turbomor/ingest/netlist.hpp"
#include "turbomor/reduce/model.hpp"

namespace turbomor {

enum class RomFormat { bundle, netlist };

inline constexpr int kRomSchemaVersion = 1;

/// Writes `rom.G.mtx`, `rom.C.mtx`, `rom.B.mtx` and `rom.json` into `dir`
/// (created if missing).
void export_rom_bundle(const ReducedModel& rom, const std::string& dir);

/// Unstamps the model into RC elements. Requires a selector B̂. Negative
/// element values are allowed and announced in the header comments.
Netlist rom_to_netlist(const ReducedModel& rom);
std::string export_rom_netlist_text(const ReducedModel& rom);

/// `path` is a directory for bundles and a file for netlists.
void export_rom(const ReducedModel& rom, RomFormat format, const std::string& path);

/// Reads a bundle written by export_rom_bundle, including its block layout.
ReducedModel load_rom(const std::string& dir);

}  // namespace turbomor
