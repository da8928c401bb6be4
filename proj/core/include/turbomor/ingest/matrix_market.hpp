// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>

#include "turbomor/common.hpp"

namespace turbomor {

enum class MarketSymmetry { general, symmetric };

struct MarketMatrix {
  SparseMatrix matrix;  // full storage (symmetric files are mirrored)
  MarketSymmetry symmetry = MarketSymmetry::general;
};

/// Reads a `%%MatrixMarket matrix coordinate real {general|symmetric}` file.
MarketMatrix read_matrix_market(std::istream& in, const std::string& source = "<stream>");
MarketMatrix read_matrix_market_file(const std::string& path);

/// Symmetric output stores the lower triangle only.
void write_matrix_market(std::ostream& out, const SparseMatrix& a, MarketSymmetry symmetry);
void write_matrix_market_file(const std::string& path, const SparseMatrix& a,
                              MarketSymmetry symmetry);

}  // namespace turbomor
