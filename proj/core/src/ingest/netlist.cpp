// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include "turbomor/ingest/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "turbomor/common.hpp"

namespace turbomor {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

struct Token {
  std::string_view text;
  int column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return tokens;
}

}  // namespace

bool parse_value(std::string_view token, double& out) {
  if (token.empty()) return false;
  std::string t = lower(token);
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  double mantissa = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, mantissa);
  if (ec != std::errc() || ptr == begin) return false;
  std::string_view suffix(ptr, static_cast<std::size_t>(end - ptr));
  double scale = 1.0;
  if (suffix.empty()) {
    scale = 1.0;
  } else if (suffix == "meg") {
    scale = 1e6;
  } else if (suffix.size() == 1) {
    switch (suffix[0]) {
      case 'f': scale = 1e-15; break;
      case 'p': scale = 1e-12; break;
      case 'n': scale = 1e-9; break;
      case 'u': scale = 1e-6; break;
      case 'm': scale = 1e-3; break;
      case 'k': scale = 1e3; break;
      default: return false;
    }
  } else {
    return false;
  }
  out = mantissa * scale;
  return std::isfinite(out);
}

Netlist parse_netlist(std::string_view text, const ParseOptions& options) {
  Netlist net;
  std::unordered_set<std::string> element_names;
  std::unordered_set<std::string> port_names;
  std::unordered_set<std::string> port_nodes;
  std::unordered_set<std::string> known_nodes;
  std::vector<std::pair<int, int>> port_locations;  // for deferred "unknown node" errors

  auto fail = [&](int line, int column, const std::string& msg) -> void {
    throw ParseError(options.source_name, line, column, msg);
  };

  int line_no = 0;
  std::size_t pos = 0;
  bool ended = false;
  while (pos <= text.size() && !ended) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    ++line_no;

    auto tokens = tokenize(line);
    if (tokens.empty() || tokens[0].text[0] == '*') continue;

    std::string head = lower(tokens[0].text);
    if (head == ".end") {
      ended = true;
      break;
    }
    char kind = head[0];
    if (kind == 'r' || kind == 'c') {
      if (tokens.size() != 4)
        fail(line_no, tokens[0].column,
             "expected '<name> <nodeA> <nodeB> <value>', got " + std::to_string(tokens.size()) +
                 " fields");
      if (head.size() < 2) fail(line_no, tokens[0].column, "element name is empty");
      if (!element_names.insert(head).second)
        fail(line_no, tokens[0].column, "duplicate element name '" + head + "'");
      double value = 0.0;
      if (!parse_value(tokens[3].text, value))
        fail(line_no, tokens[3].column, "malformed value '" + std::string(tokens[3].text) + "'");
      if (value == 0.0 || (value < 0.0 && !options.allow_negative_values))
        fail(line_no, tokens[3].column,
             "element value must be positive, got '" + std::string(tokens[3].text) + "'");
      Element e;
      e.kind = kind == 'r' ? ElementKind::resistor : ElementKind::capacitor;
      e.name = head;
      e.node_a = lower(tokens[1].text);
      e.node_b = lower(tokens[2].text);
      e.value = value;
      known_nodes.insert(e.node_a);
      known_nodes.insert(e.node_b);
      net.elements.push_back(std::move(e));
    } else if (kind == 'p') {
      if (tokens.size() != 2)
        fail(line_no, tokens[0].column, "expected 'P<name> <node>'");
      if (head.size() < 2) fail(line_no, tokens[0].column, "port name is empty");
      if (!port_names.insert(head).second)
        fail(line_no, tokens[0].column, "duplicate port name '" + head + "'");
      std::string node = lower(tokens[1].text);
      if (node == Netlist::ground) fail(line_no, tokens[1].column, "port declared on ground node");
      if (!port_nodes.insert(node).second)
        fail(line_no, tokens[1].column, "node '" + node + "' already declared as a port");
      net.ports.push_back({head, node});
      port_locations.emplace_back(line_no, tokens[1].column);
    } else {
      fail(line_no, tokens[0].column, "unknown statement '" + std::string(tokens[0].text) + "'");
    }
  }

  if (net.ports.empty()) fail(line_no, 1, "no ports declared");
  for (std::size_t k = 0; k < net.ports.size(); ++k) {
    if (!known_nodes.contains(net.ports[k].node))
      fail(port_locations[k].first, port_locations[k].second,
           "port node '" + net.ports[k].node + "' is not connected to any element");
  }
  return net;
}

Netlist read_netlist_file(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open netlist '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  ParseOptions opts = options;
  if (opts.source_name == "<netlist>") opts.source_name = path;
  return parse_netlist(buffer.str(), opts);
}

std::string format_netlist(const Netlist& net, const std::vector<std::string>& header) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& line : header) out << "* " << line << "\n";
  for (const auto& e : net.elements)
    out << e.name << ' ' << e.node_a << ' ' << e.node_b << ' ' << e.value << "\n";
  for (const auto& p : net.ports) out << p.name << ' ' << p.node << "\n";
  out << ".end\n";
  return out.str();
}

}  // namespace turbomor
