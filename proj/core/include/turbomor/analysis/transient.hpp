// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "turbomor/ingest/descriptor.hpp"
#include "turbomor/reduce/model.hpp"

namespace turbomor {

/// Piecewise-linear waveform; constant before the first and after the last
/// breakpoint.
struct PwlSource {
  std::vector<double> t;
  std::vector<double> v;

  double at(double time) const;
  static PwlSource constant(double value);
  /// 0 before `t0`, then a linear ramp to `value` over `rise`.
  static PwlSource step(double value, double t0 = 0.0, double rise = 0.0);
};

enum class TransientBackend { automatic, sparse, dense, block_tridiagonal };

struct TransientOptions {
  TransientBackend backend = TransientBackend::automatic;
  /// Record x^T C x after every step.
  bool record_energy = false;
};

struct TransientResult {
  std::vector<double> time;
  DenseMatrix y;  // time points x ports
  double dt = 0.0;
  std::string method = "trapezoidal";
  std::string backend;
  std::vector<double> energy;
  double factor_seconds = 0.0;
  double step_seconds = 0.0;
};

/// Fixed-step trapezoidal integration of G x + C x' = B u from x(0) = 0,
/// with one factorization of G + (2/dt) C. The first step is taken as two
/// backward Euler half steps, which use the same matrix.
TransientResult transient_sim(const SparseMatrix& g, const SparseMatrix& c, const SparseMatrix& b,
                              const std::vector<PwlSource>& sources, double t_end, double dt,
                              const TransientOptions& options = {},
                              const std::vector<BlockInfo>& blocks = {});
TransientResult transient_sim(const DescriptorSystem& sys, const std::vector<PwlSource>& sources,
                              double t_end, double dt, const TransientOptions& options = {});
/// Uses the block layout of the model when it is block tridiagonal.
TransientResult transient_sim(const ReducedModel& rom, const std::vector<PwlSource>& sources,
                              double t_end, double dt, const TransientOptions& options = {});

struct ErrorMetrics {
  std::vector<double> max_abs;  // per port
  double global_max = 0.0;
  double rms = 0.0;
};

/// Elementwise comparison; throws InputError unless grids and port counts match.
ErrorMetrics error_metrics(const TransientResult& reference, const TransientResult& candidate);

}  // namespace turbomor
