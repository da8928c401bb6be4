// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <string>
#include <vector>

#include "turbomor/ingest/descriptor.hpp"
#include "turbomor/reduce/model.hpp"

namespace turbomor {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

struct TransferSample {
  Complex s;
  ComplexMatrix h;  // p x p, empty when the sample failed
  bool ok = false;
  std::string error;
};

/// H(s) = B^T (G + sC)^{-1} B at each sample. A singular pencil fails only
/// that sample.
std::vector<TransferSample> transfer_eval(const SparseMatrix& g, const SparseMatrix& c,
                                          const SparseMatrix& b, const std::vector<Complex>& s);
std::vector<TransferSample> transfer_eval(const DescriptorSystem& sys, const std::vector<Complex>& s);
std::vector<TransferSample> transfer_eval(const ReducedModel& rom, const std::vector<Complex>& s);

/// s = j 2 pi f for each frequency f in hertz.
std::vector<Complex> frequency_samples(const std::vector<double>& hertz);

/// Relative Frobenius errors ||H - Hhat|| / ||H|| per sample; failed samples
/// give NaN.
std::vector<double> transfer_errors(const std::vector<TransferSample>& reference,
                                    const std::vector<TransferSample>& candidate);

/// Least-squares slope of log(error) against log|s|.
double loglog_slope(const std::vector<Complex>& s, const std::vector<double>& errors);

/// Slope over the `window` smallest |s| whose error lies above `noise_floor`.
/// NaN when fewer than two such samples exist.
double asymptotic_slope(const std::vector<Complex>& s, const std::vector<double>& errors,
                        double noise_floor = 1e-11, std::size_t window = 5);

}  // namespace turbomor
