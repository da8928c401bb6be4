// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include "turbomor/generators/networks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace turbomor {

namespace {

class Builder {
 public:
  void resistor(const std::string& a, const std::string& b, double value) {
    net_.elements.push_back({ElementKind::resistor, "r" + std::to_string(++count_), a, b, value});
  }
  void capacitor(const std::string& a, const std::string& b, double value) {
    net_.elements.push_back({ElementKind::capacitor, "c" + std::to_string(++count_), a, b, value});
  }
  void port(const std::string& node) {
    net_.ports.push_back({"p" + std::to_string(net_.ports.size() + 1), node});
  }
  Netlist take() { return std::move(net_); }

 private:
  Netlist net_;
  Index count_ = 0;
};

std::string bus_node(Index line, Index k) { return "l" + std::to_string(line) + "_" + std::to_string(k); }

}  // namespace

Netlist generate_bus(const BusOptions& o) {
  if (o.lines < 1 || o.segments < 1) throw InputError("bus needs at least one line and one segment");
  Builder net;
  const std::string gnd(Netlist::ground);
  for (Index line = 0; line < o.lines; ++line) {
    net.resistor(bus_node(line, 0), gnd, o.r_driver);
    for (Index s = 0; s < o.segments; ++s) {
      const Index mid = 2 * s + 1;
      net.resistor(bus_node(line, mid - 1), bus_node(line, mid), 0.5 * o.r_segment);
      net.resistor(bus_node(line, mid), bus_node(line, mid + 1), 0.5 * o.r_segment);
      net.capacitor(bus_node(line, mid), gnd, o.c_ground);
      if (line + 1 < o.lines && o.c_coupling > 0.0)
        net.capacitor(bus_node(line, mid), bus_node(line + 1, mid), o.c_coupling);
    }
    net.capacitor(bus_node(line, 2 * o.segments), gnd, o.c_load);
  }
  for (Index line = 0; line < o.lines; ++line) net.port(bus_node(line, 0));
  for (Index line = 0; line < o.lines; ++line) net.port(bus_node(line, 2 * o.segments));
  return net.take();
}

Netlist generate_mesh(const MeshOptions& o) {
  const Index n = o.rows * o.cols;
  if (o.rows < 1 || o.cols < 1) throw InputError("mesh needs at least one row and column");
  if (o.ports < 1 || o.ports > n) throw InputError("mesh port count must be between 1 and the node count");
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> factor_exp(-1.0, 1.0);
  auto vary = [&](double v) { return v * std::exp2(factor_exp(rng)); };
  auto node = [&](Index r, Index c) { return "m" + std::to_string(r) + "_" + std::to_string(c); };

  Builder net;
  const std::string gnd(Netlist::ground);
  for (Index r = 0; r < o.rows; ++r)
    for (Index c = 0; c < o.cols; ++c) {
      if (c + 1 < o.cols) net.resistor(node(r, c), node(r, c + 1), vary(o.r_edge));
      if (r + 1 < o.rows) net.resistor(node(r, c), node(r + 1, c), vary(o.r_edge));
      net.capacitor(node(r, c), gnd, vary(o.c_node));
    }
  const Index pads = std::max<Index>(o.pads, 1);
  for (Index k = 0; k < pads; ++k) {
    const Index flat = (k * n) / pads + n / (2 * pads);
    const Index at = std::min(flat, n - 1);
    net.resistor(node(at / o.cols, at % o.cols), gnd, vary(o.r_pad));
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  for (Index k = 0; k < o.ports; ++k) {
    const Index at = order[static_cast<std::size_t>(k)];
    net.port(node(at / o.cols, at % o.cols));
  }
  return net.take();
}

Netlist generate_random_rc(const RandomRcOptions& o) {
  if (o.nodes < 1) throw InputError("random network needs at least one node");
  if (o.ports < 1 || o.ports > o.nodes) throw InputError("port count must be between 1 and the node count");
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, unit(rng)); };
  auto resistance = [&] { return log_uniform(10.0, 1e3); };
  auto capacitance = [&] { return log_uniform(1e-14, 1e-12); };
  auto node = [](Index i) { return "n" + std::to_string(i + 1); };
  auto pick = [&](Index n) { return static_cast<Index>(unit(rng) * static_cast<double>(n)) % n; };

  Builder net;
  const std::string gnd(Netlist::ground);
  for (Index i = 1; i < o.nodes; ++i) net.resistor(node(i), node(pick(i)), resistance());
  std::set<std::pair<Index, Index>> used;
  const auto extra = static_cast<Index>(std::llround(o.extra_edges * static_cast<double>(o.nodes)));
  for (Index e = 0; e < extra && o.nodes > 1; ++e) {
    Index a = pick(o.nodes);
    Index b = pick(o.nodes);
    if (a == b || !used.insert({std::min(a, b), std::max(a, b)}).second) continue;
    if (unit(rng) < 0.6)
      net.resistor(node(a), node(b), resistance());
    else
      net.capacitor(node(a), node(b), capacitance());
  }
  net.resistor(node(0), gnd, resistance());
  for (Index i = 0; i < o.nodes; ++i) {
    if (unit(rng) < 0.8) net.capacitor(node(i), gnd, capacitance());
    if (i > 0 && unit(rng) < 0.1) net.resistor(node(i), gnd, 10.0 * resistance());
  }

  std::vector<Index> order(static_cast<std::size_t>(o.nodes));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  for (Index k = 0; k < o.ports; ++k) net.port(node(order[static_cast<std::size_t>(k)]));

  for (Index k = 0; k < o.capacitor_only_nodes; ++k) {
    const std::string floating = "f" + std::to_string(k + 1);
    for (int link = 0; link < 2; ++link) net.capacitor(floating, node(pick(o.nodes)), capacitance());
    net.capacitor(floating, gnd, capacitance());
  }
  return net.take();
}

}  // namespace turbomor
