// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

#include "turbomor/ingest/descriptor.hpp"

namespace turbomor {

/// File locations of a matrix bundle. The sidecar is JSON:
/// `{"m": .., "p": .., "ports": [node names], "labels": [node names]}`;
/// `labels` is optional and defaults to 1-based row numbers.
struct BundlePaths {
  std::string g;
  std::string c;
  std::string b;
  std::string sidecar;  // empty or missing file = none

  /// `<dir>/<prefix>.G.mtx` etc. An empty prefix gives `<dir>/G.mtx`.
  static BundlePaths in_directory(const std::string& dir, const std::string& prefix);
  /// Probes `sys.*`, then `rom.*`, then unprefixed names inside `dir`.
  static BundlePaths discover(const std::string& dir);
};

struct BundleOptions {
  /// Reject B unless every column holds a single unit entry.
  bool require_selector = true;
  /// Reorder ports first (only meaningful when B is a selector).
  bool canonicalize = true;
};

/// Loads and validates a bundle. A sidecar `ports` list overrides B.
DescriptorSystem load_matrix_bundle(const BundlePaths& paths, const BundleOptions& options = {});

/// Writes G, C (symmetric) and B (general) plus a sidecar with labels and ports.
void write_matrix_bundle(const BundlePaths& paths, const DescriptorSystem& sys);

}  // namespace turbomor
