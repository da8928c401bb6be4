// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace turbomor {

enum class ElementKind { resistor, capacitor };

struct Element {
  ElementKind kind = ElementKind::resistor;
  std::string name;    // including the R/C prefix, lower-case
  std::string node_a;
  std::string node_b;
  double value = 0.0;  // ohm or farad
};

struct PortDecl {
  std::string name;
  std::string node;
};

/// An RC network. Node `0` is ground; names are case-folded to lower case.
struct Netlist {
  std::vector<Element> elements;
  std::vector<PortDecl> ports;

  static constexpr std::string_view ground = "0";
};

struct ParseOptions {
  /// Accept negative element values (exported reduced models may carry them).
  bool allow_negative_values = false;
  /// Name used in diagnostics.
  std::string source_name = "<netlist>";
};

/// Parses the line-oriented RC grammar:
///
///     * comment
///     R<name> <nodeA> <nodeB> <value>
///     C<name> <nodeA> <nodeB> <value>
///     P<name> <node>
///     .end
///
/// Values accept SI suffixes f p n u m k meg. Throws ParseError with a
/// line/column location on any violation.
Netlist parse_netlist(std::string_view text, const ParseOptions& options = {});

Netlist read_netlist_file(const std::string& path, const ParseOptions& options = {});

/// Parses a single value token such as `1.5k` or `2e-12`. Returns false if
/// the token is malformed.
bool parse_value(std::string_view token, double& out);

/// Writes `net` in the same grammar; `header` lines are emitted as comments.
std::string format_netlist(const Netlist& net, const std::vector<std::string>& header = {});

}  // namespace turbomor
