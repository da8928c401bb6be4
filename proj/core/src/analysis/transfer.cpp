// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include "turbomor/analysis/transfer.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace turbomor {

namespace {

constexpr Index kDenseLimit = 600;

using ComplexSparse = Eigen::SparseMatrix<Complex, Eigen::ColMajor, int>;

TransferSample eval_dense(const DenseMatrix& g, const DenseMatrix& c, const ComplexMatrix& b, Complex s) {
  TransferSample out;
  out.s = s;
  const ComplexMatrix a = g.cast<Complex>() + s * c.cast<Complex>();
  Eigen::PartialPivLU<ComplexMatrix> lu(a);
  const double rcond = a.rows() ? lu.rcond() : 1.0;
  if (!(rcond > 1e-14)) {
    out.error = "singular pencil (rcond " + std::to_string(rcond) + ")";
    return out;
  }
  out.h = b.adjoint() * lu.solve(b);
  out.ok = true;
  return out;
}

TransferSample eval_sparse(const SparseMatrix& g, const SparseMatrix& c, const ComplexMatrix& b, Complex s) {
  TransferSample out;
  out.s = s;
  ComplexSparse a = (g.cast<Complex>() + s * c.cast<Complex>()).cast<Complex>();
  a.makeCompressed();
  Eigen::SparseLU<ComplexSparse, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) {
    out.error = "singular pencil: " + lu.lastErrorMessage();
    return out;
  }
  ComplexMatrix x = lu.solve(b);
  if (lu.info() != Eigen::Success || !x.allFinite()) {
    out.error = "solve failed";
    return out;
  }
  out.h = b.adjoint() * x;
  out.ok = true;
  return out;
}

}  // namespace

std::vector<TransferSample> transfer_eval(const SparseMatrix& g, const SparseMatrix& c,
                                          const SparseMatrix& b, const std::vector<Complex>& s) {
  const Index m = g.rows();
  if (g.cols() != m || c.rows() != m || c.cols() != m || b.rows() != m)
    throw DimensionMismatch("transfer_eval: inconsistent dimensions");
  for (const Complex& z : s)
    if (z.real() < 0.0) throw InputError("transfer_eval: samples must have Re(s) >= 0");

  const ComplexMatrix bc = DenseMatrix(b).cast<Complex>();
  std::vector<TransferSample> out;
  out.reserve(s.size());
  if (m <= kDenseLimit) {
    const DenseMatrix gd(g);
    const DenseMatrix cd(c);
    for (const Complex& z : s) out.push_back(eval_dense(gd, cd, bc, z));
  } else {
    for (const Complex& z : s) out.push_back(eval_sparse(g, c, bc, z));
  }
  return out;
}

std::vector<TransferSample> transfer_eval(const DescriptorSystem& sys, const std::vector<Complex>& s) {
  return transfer_eval(sys.g, sys.c, sys.b, s);
}

std::vector<TransferSample> transfer_eval(const ReducedModel& rom, const std::vector<Complex>& s) {
  return transfer_eval(rom.g, rom.c, rom.b, s);
}

std::vector<Complex> frequency_samples(const std::vector<double>& hertz) {
  std::vector<Complex> out;
  for (double f : hertz) out.emplace_back(0.0, 2.0 * std::numbers::pi * f);
  return out;
}

std::vector<double> transfer_errors(const std::vector<TransferSample>& reference,
                                    const std::vector<TransferSample>& candidate) {
  if (reference.size() != candidate.size()) throw InputError("transfer_errors: sample counts differ");
  std::vector<double> out;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const auto& a = reference[i];
    const auto& b = candidate[i];
    if (!a.ok || !b.ok || a.h.rows() != b.h.rows() || a.h.cols() != b.h.cols()) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double denom = a.h.norm();
    out.push_back(denom > 0.0 ? (a.h - b.h).norm() / denom : (a.h - b.h).norm());
  }
  return out;
}

double loglog_slope(const std::vector<Complex>& s, const std::vector<double>& errors) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < s.size() && i < errors.size(); ++i) {
    if (!(errors[i] > 0.0) || !std::isfinite(errors[i]) || std::abs(s[i]) == 0.0) continue;
    const double x = std::log(std::abs(s[i]));
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double d = n * sxx - sx * sx;
  return d != 0.0 ? (n * sxy - sx * sy) / d : std::numeric_limits<double>::quiet_NaN();
}

double asymptotic_slope(const std::vector<Complex>& s, const std::vector<double>& errors, double noise_floor,
                        std::size_t window) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < s.size() && i < errors.size(); ++i)
    if (std::isfinite(errors[i]) && errors[i] > noise_floor && std::abs(s[i]) > 0.0) idx.push_back(i);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return std::abs(s[a]) < std::abs(s[b]); });
  if (idx.size() > window) idx.resize(window);
  std::vector<Complex> ss;
  std::vector<double> ee;
  for (std::size_t i : idx) {
    ss.push_back(s[i]);
    ee.push_back(errors[i]);
  }
  return loglog_slope(ss, ee);
}

}  // namespace turbomor
