// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include "turbomor/ingest/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace turbomor {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

MarketMatrix read_matrix_market(std::istream& in, const std::string& source) {
  std::string line;
  int line_no = 1;
  if (!std::getline(in, line)) throw ParseError(source, 1, 1, "empty Matrix Market file");
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") throw ParseError(source, 1, 1, "missing %%MatrixMarket banner");
  if (lower(object) != "matrix" || lower(format) != "coordinate")
    throw ParseError(source, 1, 1, "only 'matrix coordinate' files are supported");
  if (lower(field) != "real" && lower(field) != "integer")
    throw ParseError(source, 1, 1, "only real-valued matrices are supported");
  MarketMatrix result;
  symmetry = lower(symmetry);
  if (symmetry == "general") {
    result.symmetry = MarketSymmetry::general;
  } else if (symmetry == "symmetric") {
    result.symmetry = MarketSymmetry::symmetric;
  } else {
    throw ParseError(source, 1, 1, "unsupported symmetry '" + symmetry + "'");
  }

  Index rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream size_line(line);
    if (!(size_line >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
      throw ParseError(source, line_no, 1, "malformed size line");
    break;
  }
  if (rows < 0) throw ParseError(source, line_no, 1, "missing size line");
  if (result.symmetry == MarketSymmetry::symmetric && rows != cols)
    throw ParseError(source, line_no, 1, "symmetric matrix must be square");

  // Keyed by (row, col) to detect contradictory duplicates in symmetric files.
  std::map<std::pair<Index, Index>, double> entries;
  Index seen = 0;
  while (seen < nnz && std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream entry(line);
    Index i = 0, j = 0;
    double v = 0.0;
    if (!(entry >> i >> j >> v)) throw ParseError(source, line_no, 1, "malformed entry");
    if (i < 1 || i > rows || j < 1 || j > cols)
      throw ParseError(source, line_no, 1, "entry index out of range");
    --i;
    --j;
    if (result.symmetry == MarketSymmetry::symmetric) {
      auto key = std::minmax(i, j);
      auto [it, inserted] = entries.emplace(std::make_pair(key.second, key.first), v);
      if (!inserted) {
        if (it->second != v)
          throw InputError(source + ": matrix declared symmetric has asymmetric entries at (" +
                           std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")");
      }
    } else {
      entries[{i, j}] += v;
    }
    ++seen;
  }
  if (seen != nnz)
    throw ParseError(source, line_no, 1,
                     "expected " + std::to_string(nnz) + " entries, found " + std::to_string(seen));

  std::vector<Triplet> trips;
  trips.reserve(entries.size() * 2);
  for (const auto& [key, v] : entries) {
    trips.emplace_back(key.first, key.second, v);
    if (result.symmetry == MarketSymmetry::symmetric && key.first != key.second)
      trips.emplace_back(key.second, key.first, v);
  }
  result.matrix.resize(rows, cols);
  result.matrix.setFromTriplets(trips.begin(), trips.end());
  result.matrix = pruned(result.matrix);
  return result;
}

MarketMatrix read_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_matrix_market(in, path);
}

void write_matrix_market(std::ostream& out, const SparseMatrix& a, MarketSymmetry symmetry) {
  const bool sym = symmetry == MarketSymmetry::symmetric;
  if (sym && a.rows() != a.cols()) throw DimensionMismatch("symmetric output needs a square matrix");
  Index count = 0;
  for (Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
      if (it.value() != 0.0 && (!sym || it.row() >= it.col())) ++count;
  out << "%%MatrixMarket matrix coordinate real " << (sym ? "symmetric" : "general") << "\n";
  out << a.rows() << ' ' << a.cols() << ' ' << count << "\n";
  std::ostringstream body;
  body.precision(17);
  for (Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
      if (it.value() != 0.0 && (!sym || it.row() >= it.col()))
        body << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << "\n";
  out << body.str();
}

void write_matrix_market_file(const std::string& path, const SparseMatrix& a,
                              MarketSymmetry symmetry) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_matrix_market(out, a, symmetry);
  if (!out) throw InputError("write failed for '" + path + "'");
}

}  // namespace turbomor
