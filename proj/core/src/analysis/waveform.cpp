// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include "turbomor/analysis/waveform.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "turbomor/ingest/netlist.hpp"

namespace turbomor {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  return out;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_table(std::istream& in, const std::string& source) {
  CsvTable table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    auto fields = split_csv(line);
    if (table.header.empty()) {
      table.header = std::move(fields);
      if (table.header.empty() || table.header[0] != "t")
        throw ParseError(source, line_no, 1, "first column must be named 't'");
      continue;
    }
    if (fields.size() != table.header.size())
      throw ParseError(source, line_no, 1,
                       "expected " + std::to_string(table.header.size()) + " fields, found " +
                           std::to_string(fields.size()));
    std::vector<double> row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      double v = 0.0;
      if (!parse_value(fields[i], v)) throw ParseError(source, line_no, static_cast<int>(i) + 1, "bad number '" + fields[i] + "'");
      row.push_back(v);
    }
    if (!table.rows.empty() && row[0] < table.rows.back()[0])
      throw ParseError(source, line_no, 1, "time must be non-decreasing");
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw ParseError(source, line_no, 1, "missing header row");
  return table;
}

}  // namespace

std::vector<PwlSource> read_pwl_csv(std::istream& in, const std::string& source) {
  CsvTable table = read_table(in, source);
  std::vector<PwlSource> out(table.header.size() - 1);
  for (const auto& row : table.rows)
    for (std::size_t j = 1; j < row.size(); ++j) {
      out[j - 1].t.push_back(row[0]);
      out[j - 1].v.push_back(row[j]);
    }
  return out;
}

std::vector<PwlSource> read_pwl_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open waveform file '" + path + "'");
  return read_pwl_csv(in, path);
}

void write_waveform_csv(std::ostream& out, const TransientResult& result, const std::vector<std::string>& names) {
  out << "t";
  for (Index j = 0; j < result.y.cols(); ++j)
    out << ',' << (static_cast<std::size_t>(j) < names.size() ? names[static_cast<std::size_t>(j)] : "port" + std::to_string(j + 1));
  out << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < result.time.size(); ++k) {
    out << result.time[k];
    for (Index j = 0; j < result.y.cols(); ++j) out << ',' << result.y(static_cast<Index>(k), j);
    out << '\n';
  }
}

void write_waveform_csv_file(const std::string& path, const TransientResult& result,
                             const std::vector<std::string>& names) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_waveform_csv(out, result, names);
}

TransientResult read_waveform_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open waveform file '" + path + "'");
  CsvTable table = read_table(in, path);
  TransientResult out;
  const auto ports = static_cast<Index>(table.header.size()) - 1;
  out.y = DenseMatrix(static_cast<Index>(table.rows.size()), ports);
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    out.time.push_back(table.rows[k][0]);
    for (Index j = 0; j < ports; ++j) out.y(static_cast<Index>(k), j) = table.rows[k][static_cast<std::size_t>(j) + 1];
  }
  if (out.time.size() > 1) out.dt = out.time[1] - out.time[0];
  return out;
}

}  // namespace turbomor
