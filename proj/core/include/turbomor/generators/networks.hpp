// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "turbomor/common.hpp"
#include "turbomor/ingest/netlist.hpp"

namespace turbomor {

/// On-chip bus: `lines` parallel wires of `segments` RC T-sections each
/// (2 * segments + 1 nodes per wire). Neighbouring wires couple through
/// capacitors at the section midpoints. Each wire has a driver resistance to
/// ground at its near end and a load capacitance at its far end; both ends
/// are ports, near ends first, so p = 2 * lines.
struct BusOptions {
  Index lines = 32;
  Index segments = 150;
  double r_segment = 1.0;
  double c_ground = 2e-15;
  double c_coupling = 1e-15;
  double r_driver = 100.0;
  double c_load = 5e-15;
};

Netlist generate_bus(const BusOptions& options);

/// Power-grid style resistive mesh with node capacitance, `pads` resistive
/// connections to ground spread over the grid and `ports` distinct random
/// port nodes. Element values vary by a seeded factor in [0.5, 2].
struct MeshOptions {
  Index rows = 20;
  Index cols = 20;
  Index ports = 8;
  Index pads = 4;
  double r_edge = 0.5;
  double c_node = 10e-15;
  double r_pad = 0.1;
  std::uint64_t seed = 1;
};

Netlist generate_mesh(const MeshOptions& options);

/// Random connected RC network: a random spanning tree of resistors plus
/// extra resistive or capacitive edges, node capacitances and a few
/// resistors to ground. `capacitor_only_nodes` extra internal nodes attach
/// through capacitors only, which makes G singular.
struct RandomRcOptions {
  Index nodes = 50;
  Index ports = 4;
  double extra_edges = 0.5;  // per node
  Index capacitor_only_nodes = 0;
  std::uint64_t seed = 1;
};

Netlist generate_random_rc(const RandomRcOptions& options);

}  // namespace turbomor
