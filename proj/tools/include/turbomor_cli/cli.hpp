// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "turbomor/reduce/model.hpp"

namespace turbomor::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_verify_failed = 1,
  exit_usage = 2,
  exit_input = 3,
  exit_numerical = 4,
};

inline constexpr int kReportSchemaVersion = 1;

/// Raised for option combinations the parser cannot reject on its own.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exactly one of the two must be set.
struct InputSpec {
  std::string netlist;
  std::string bundle;
};

struct ReduceConfig {
  InputSpec input;
  std::string method = "turbomor";  // turbomor | prima
  int q = 1;
  bool partition = false;
  Index leaf_size = 5000;
  std::string perm_file;
  ReductionOptions options;
  std::string out = "rom";
  std::string format = "bundle";  // bundle | netlist
  std::string report;             // default: next to the output
};

struct VerifyConfig {
  InputSpec input;
  std::string rom;
  int moments = 0;  // 0 with no other check selected means 2q
  std::vector<double> freq;
  double freq_tol = 1e-3;
  double moment_tol = 1e-8;
  bool passivity = false;
  double passivity_tol = 1e-10;
  std::string report;
};

struct SimulateConfig {
  InputSpec input;
  std::string rom;
  std::string waveform;
  double step = 0.0;  // amplitude of a step on every port when no waveform is given
  double rise = 0.0;
  double t_end = 0.0;
  double dt = 0.0;
  std::string backend = "auto";  // auto | sparse | dense | block
  std::string out = "waveform.csv";
  std::string reference;
  std::string metrics;
};

struct BenchExample {
  std::string name;
  std::string kind;  // bus | mesh | netlist | bundle
  Index lines = 32;
  Index segments = 150;
  Index rows = 20;
  Index cols = 20;
  Index ports = 8;
  Index pads = 4;
  std::uint64_t seed = 1;
  std::string path;
};

struct BenchConfig {
  std::vector<BenchExample> examples;
  std::vector<std::string> methods{"turbomor", "prima"};  // also turbomor-partitioned
  std::vector<int> q{1};
  Index leaf_size = 5000;
  int repeats = 3;
  bool simulate = false;
  double t_end = 1e-9;
  double dt = 1e-12;
  bool parallel = false;
  std::string out = "bench.csv";
  std::string report;
};

struct BenchRow {
  std::string example;
  std::string method;
  int q = 0;
  Index m = 0;
  Index p = 0;
  double reduce_time = 0.0;
  double sim_time = 0.0;
  Index rom_order = 0;
  Index nnz = 0;
  bool ok = false;
  bool contended = false;
  std::string error;
};

int cmd_reduce(const ReduceConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateConfig& config, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchConfig& config, std::ostream& out, std::ostream& err);

/// Runs every cell of the suite; failures are recorded per row.
std::vector<BenchRow> run_bench(const BenchConfig& config);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);
/// Reads a JSON suite description into `config`.
void load_bench_suite(const std::string& path, BenchConfig& config);

/// Full command line, argv[0] included.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace turbomor::cli
