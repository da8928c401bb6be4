// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "support/oracles.hpp"
#include "turbomor/analysis/moments.hpp"
#include "turbomor/analysis/passivity.hpp"
#include "turbomor/analysis/transfer.hpp"
#include "turbomor/analysis/transient.hpp"
#include "turbomor/analysis/waveform.hpp"
#include "turbomor/prima/prima.hpp"
#include "turbomor/reduce/turbomor.hpp"

using namespace turbomor;
using namespace turbomor::testing;

namespace {

std::vector<DenseMatrix> as_vector(const MomentSet& s) { return s.m; }

}  // namespace

TEST_SUITE("moments") {
  TEST_CASE("single resistor") {
    const DescriptorSystem sys = stamp(parse_netlist("R1 a 0 0.5\nP1 a\n"));
    const MomentSet m = moments_direct(sys, 4);
    CHECK(m[0](0, 0) == doctest::Approx(0.5));
    for (Index k = 1; k < 4; ++k) CHECK(m[k](0, 0) == 0.0);
  }

  TEST_CASE("two-node example") {
    const MomentSet m = moments_direct(stamp_example(), 4);
    CHECK(m[0](0, 0) == doctest::Approx(2.0));
    CHECK(m[1](0, 0) == doctest::Approx(-1.0));
    CHECK(relative_moment_error(oracle_moments(stamp_example(), 4), as_vector(m)) <= 1e-14);
  }

  TEST_CASE("M0 equals the transfer function at s = 0") {
    const RandomCase rc = random_case(4, 50, 3);
    const MomentSet m = moments_direct(rc.sys, 1);
    const auto h = transfer_eval(rc.sys, {Complex(0.0, 0.0)});
    REQUIRE(h[0].ok);
    CHECK((h[0].h.real() - m[0]).norm() <= 1e-12 * m[0].norm());
  }

  TEST_CASE("moments are symmetric") {
    const RandomCase rc = random_case(6, 90, 5);
    const MomentSet m = moments_direct(rc.sys, 6);
    for (Index k = 0; k < 6; ++k) CHECK((m[k] - m[k].transpose()).norm() <= 1e-12 * m[k].norm());
  }

  TEST_CASE("singular G with capacitor-only nodes") {
    const RandomCase rc = random_case(21, 40, 3, 4);
    const MomentSet m = moments_direct(rc.sys, 5);
    const auto oracle = cauchy_moments(dense(rc.sys.g), dense(rc.sys.c), dense(rc.sys.b), 5);
    CHECK(relative_moment_error(oracle, as_vector(m)) <= 1e-8);
  }

  TEST_CASE("pole at the origin is rejected") {
    const DescriptorSystem floating = stamp(parse_netlist("R1 a b 1\nC1 b 0 1\nP1 a\n"));
    CHECK_THROWS_AS(moments_direct(floating, 2), SingularMatrix);
  }

  TEST_CASE("recursive moments of the two-node example") {
    const DescriptorSystem sys = stamp_example();
    const Iteration1Result it = reduce_iteration1(sys);
    const MomentSet inner = inner_moments(it.inner, 2);
    // Inner system: G22 = 2, C22 = 1, input C21' = 0.5.
    CHECK(inner[0](0, 0) == doctest::Approx(0.125));
    CHECK(inner[1](0, 0) == doctest::Approx(-0.0625));
    const MomentSet rec = moments_recursive(it.outer.b1, it.outer.g11, it.outer.c11, inner, 4);
    CHECK(relative_moment_error(oracle_moments(sys, 4), as_vector(rec)) <= 1e-10);
  }

  TEST_CASE("zero inner moments give the two-term recursion") {
    DenseMatrix g11(2, 2), c11(2, 2), b1 = DenseMatrix::Identity(2, 2);
    g11 << 2, -1, -1, 3;
    c11 << 1, 0.2, 0.2, 0.5;
    MomentSet zero;
    zero.m.assign(3, DenseMatrix::Zero(2, 2));
    const MomentSet rec = moments_recursive(b1, g11, c11, zero, 5);
    CHECK(relative_moment_error(oracle_moments(g11, c11, b1, 5), as_vector(rec)) <= 1e-13);
  }

  TEST_CASE("recursive against direct on a random m=40, p=2 system") {
    const RandomCase rc = random_case(40, 40, 2);
    const Iteration1Result it = reduce_iteration1(rc.sys);
    const MomentSet inner = inner_moments(it.inner, 4);
    const MomentSet rec = moments_recursive(it.outer.b1, it.outer.g11, it.outer.c11, inner, 6);
    CHECK(relative_moment_error(oracle_moments(rc.sys, 6), as_vector(rec)) <= 1e-8);
    CHECK(moment_error(moments_direct(rc.sys, 6), rec) <= 1e-8);
  }

  TEST_CASE("moment_error reports per-order errors") {
    MomentSet a, b;
    a.m = {DenseMatrix::Constant(1, 1, 2.0), DenseMatrix::Constant(1, 1, -1.0)};
    b.m = {DenseMatrix::Constant(1, 1, 2.0), DenseMatrix::Constant(1, 1, -1.5)};
    const auto e = moment_errors(a, b);
    CHECK(e[0] == 0.0);
    CHECK(e[1] == doctest::Approx(0.5));
    CHECK(moment_error(a, b) == doctest::Approx(0.5));
  }
}

TEST_SUITE("transfer") {
  TEST_CASE("two-node example at s = j") {
    const DescriptorSystem sys = stamp_example();
    const auto h = transfer_eval(sys, {Complex(0.0, 1.0)});
    REQUIRE(h[0].ok);
    const Complex want = 1.0 + 1.0 / Complex(1.0, 1.0);
    CHECK(std::abs(h[0].h(0, 0) - want) <= 1e-14);
    const auto oracle = oracle_transfer(dense(sys.g), dense(sys.c), dense(sys.b), Complex(0.0, 1.0));
    CHECK(std::abs(h[0].h(0, 0) - oracle(0, 0)) <= 1e-14);
  }

  TEST_CASE("sparse path agrees with the dense oracle") {
    const RandomCase rc = random_case(31, 700, 3);
    const auto s = frequency_samples({1e7, 1e9});
    const auto h = transfer_eval(rc.sys, s);
    for (std::size_t i = 0; i < s.size(); ++i) {
      REQUIRE(h[i].ok);
      const auto oracle = oracle_transfer(dense(rc.sys.g), dense(rc.sys.c), dense(rc.sys.b), s[i]);
      CHECK((h[i].h - oracle).norm() <= 1e-9 * oracle.norm());
    }
  }

  TEST_CASE("singular pencil fails only that sample") {
    const DescriptorSystem floating = stamp(parse_netlist("R1 a b 1\nC1 b 0 1\nP1 a\n"));
    const auto h = transfer_eval(floating, {Complex(0.0, 0.0), Complex(0.0, 1.0)});
    CHECK_FALSE(h[0].ok);
    CHECK_FALSE(h[0].error.empty());
    CHECK(h[1].ok);
  }

  TEST_CASE("negative real part is rejected") {
    CHECK_THROWS_AS(transfer_eval(stamp_example(), {Complex(-1.0, 0.0)}), InputError);
  }

  TEST_CASE("full-order models agree everywhere") {
    const RandomCase rc = random_case(9, 9, 3);
    const auto [rom, report] = turbomor_reduce(rc.sys, 3);
    const auto s = frequency_samples({0.0, 1e8, 1e10, 1e12});
    const auto err = transfer_errors(transfer_eval(rc.sys, s), transfer_eval(rom, s));
    for (double e : err) CHECK(e <= 1e-10);
  }

  TEST_CASE("error slope near s = 0") {
    const RandomCase rc = random_case(77, 120, 2);
    std::vector<double> hz;
    for (int k = 0; k <= 30; ++k) hz.push_back(1e6 * std::pow(10.0, 0.1 * k));
    const auto s = frequency_samples(hz);
    const auto ref = transfer_eval(rc.sys, s);
    for (int q = 1; q <= 3; ++q) {
      const auto [rom, report] = turbomor_reduce(rc.sys, q);
      const double slope = asymptotic_slope(s, transfer_errors(ref, transfer_eval(rom, s)), 1e-12, 3);
      CAPTURE(q);
      CHECK(slope >= 2 * q - 0.1);
    }
  }

  TEST_CASE("loglog_slope of an exact power law") {
    std::vector<Complex> s;
    std::vector<double> e;
    for (int k = 1; k <= 5; ++k) {
      s.emplace_back(0.0, std::pow(10.0, k));
      e.push_back(3.0 * std::pow(10.0, 4.0 * k));
    }
    CHECK(loglog_slope(s, e) == doctest::Approx(4.0));
  }

  TEST_CASE("asymptotic_slope skips the noise floor") {
    std::vector<Complex> s;
    std::vector<double> e;
    for (int k = 0; k <= 16; ++k) {
      const double w = std::pow(10.0, 0.25 * k);
      s.emplace_back(0.0, w);
      e.push_back(1e-15 + 1e-20 * std::pow(w, 6.0) + 1e-26 * std::pow(w, 7.0));
    }
    CHECK(asymptotic_slope(s, e, 1e-13, 3) == doctest::Approx(6.0).epsilon(0.02));
    CHECK(loglog_slope(s, e) < 5.5);
    CHECK(std::isnan(asymptotic_slope(s, e, 1e10, 3)));
  }
}

TEST_SUITE("passivity") {
  TEST_CASE("reduced models pass") {
    const RandomCase rc = random_case(5, 60, 3);
    const auto [rom, report] = turbomor_reduce(rc.sys, 3);
    const PassivityReport r = passivity_check(rom);
    CHECK(r.passed);
    CHECK(r.g.method == "eigen");
    PassivityOptions chol;
    chol.eigen_limit = 0;
    const PassivityReport rc2 = passivity_check(rom, chol);
    CHECK(rc2.passed);
    CHECK(rc2.g.method == "cholesky");
  }

  TEST_CASE("negative diagonal fails with a witness") {
    DenseMatrix g(3, 3);
    g << 2, -1, 0, -1, -1, 0, 0, 0, 1;
    const SparseMatrix gs = g.sparseView();
    const SparseMatrix cs = DenseMatrix::Identity(3, 3).sparseView();
    const PassivityReport r = passivity_check(gs, cs);
    CHECK_FALSE(r.passed);
    CHECK_FALSE(r.g.nonnegative);
    CHECK(r.g.min_value < 0.0);
    REQUIRE(r.g.witness.size() == 3);
    const double rayleigh = r.g.witness.dot(g * r.g.witness) / r.g.witness.squaredNorm();
    CHECK(rayleigh < 0.0);
    PassivityOptions chol;
    chol.eigen_limit = 0;
    const PassivityReport rc = passivity_check(gs, cs, chol);
    CHECK_FALSE(rc.passed);
    CHECK(rc.g.witness_index >= 0);
  }

  TEST_CASE("asymmetry fails") {
    DenseMatrix g(2, 2);
    g << 2, -1, -0.5, 2;
    const SparseMatrix gs = g.sparseView();
    const SparseMatrix cs = DenseMatrix::Identity(2, 2).sparseView();
    const PassivityReport r = passivity_check(gs, cs);
    CHECK_FALSE(r.g.symmetric);
    CHECK_FALSE(r.passed);
  }
}

TEST_SUITE("transient") {
  TEST_CASE("zero input gives zero response") {
    const RandomCase rc = random_case(2, 30, 2);
    const TransientResult r = transient_sim(rc.sys, {PwlSource::constant(0.0), PwlSource::constant(0.0)}, 1e-9, 1e-11);
    CHECK(r.y.cwiseAbs().maxCoeff() == 0.0);
    CHECK(r.time.size() == 101);
  }

  TEST_CASE("two-node step response") {
    const DescriptorSystem sys = stamp_example();
    const double dt = 0.01;
    const TransientResult r = transient_sim(sys, {PwlSource::step(1.0)}, 8.0, dt);
    double worst = 0.0;
    for (std::size_t k = 1; k < r.time.size(); ++k) {
      const double exact = 2.0 - std::exp(-r.time[k]);
      worst = std::max(worst, std::abs(r.y(static_cast<Index>(k), 0) - exact) / exact);
    }
    CHECK(worst <= 1e-3);
    CHECK(r.y(r.y.rows() - 1, 0) == doctest::Approx(2.0).epsilon(1e-3));
  }

  TEST_CASE("backends agree") {
    const RandomCase rc = random_case(13, 60, 3);
    const auto [rom, report] = turbomor_reduce(rc.sys, 3);
    std::vector<PwlSource> src(3, PwlSource::step(1e-3, 0.0, 1e-11));
    const double t_end = 2e-9, dt = 1e-11;
    TransientOptions dense_opt, sparse_opt, block_opt;
    dense_opt.backend = TransientBackend::dense;
    sparse_opt.backend = TransientBackend::sparse;
    block_opt.backend = TransientBackend::block_tridiagonal;
    const TransientResult a = transient_sim(rom, src, t_end, dt, dense_opt);
    const TransientResult b = transient_sim(rom, src, t_end, dt, sparse_opt);
    const TransientResult c = transient_sim(rom, src, t_end, dt, block_opt);
    CHECK(a.backend == "dense");
    CHECK(b.backend == "sparse");
    CHECK(c.backend == "block-tridiagonal");
    const double scale = a.y.cwiseAbs().maxCoeff();
    CHECK(error_metrics(a, b).global_max <= 1e-10 * scale);
    CHECK(error_metrics(a, c).global_max <= 1e-10 * scale);
    CHECK(transient_sim(rom, src, t_end, dt).backend == "block-tridiagonal");
  }

  TEST_CASE("exact reduced model reproduces the full response") {
    const DescriptorSystem sys = stamp_example();
    const auto [rom2, r2] = turbomor_reduce(sys, 2);
    const auto [rom1, r1] = turbomor_reduce(sys, 1);
    const TransientResult full = transient_sim(sys, {PwlSource::step(1.0)}, 5.0, 0.01);
    const TransientResult exact = transient_sim(rom2, {PwlSource::step(1.0)}, 5.0, 0.01);
    const TransientResult one = transient_sim(rom1, {PwlSource::step(1.0)}, 5.0, 0.01);
    CHECK(error_metrics(full, exact).global_max <= 1e-10);
    // The order-1 model responds as 2 (1 - e^{-2t}); its error against the
    // full model follows |2 e^{-2t} - e^{-t}| away from the initial jump.
    const ErrorMetrics e1 = error_metrics(full, one);
    double worst = 0.0;
    for (std::size_t k = 10; k < full.time.size(); ++k) {
      const double t = full.time[k];
      const double analytic = std::abs(2.0 * std::exp(-2.0 * t) - std::exp(-t));
      worst = std::max(worst, std::abs(std::abs(full.y(static_cast<Index>(k), 0) - one.y(static_cast<Index>(k), 0)) - analytic));
    }
    CHECK(worst <= 2e-3);
    CHECK(e1.global_max > 0.5);
  }

  TEST_CASE("stored energy never increases after the input stops") {
    const RandomCase rc = random_case(15, 50, 2);
    const auto [rom, report] = turbomor_reduce(rc.sys, 2);
    TransientOptions opt;
    opt.record_energy = true;
    const PwlSource pulse{{0.0, 1e-10, 2e-10, 3e-10}, {0.0, 1e-3, 1e-3, 0.0}};
    for (const TransientResult& r : {transient_sim(rc.sys, {pulse, pulse}, 3e-9, 1e-11, opt),
                                     transient_sim(rom, {pulse, pulse}, 3e-9, 1e-11, opt)}) {
      REQUIRE(r.energy.size() == r.time.size());
      const double peak = *std::max_element(r.energy.begin(), r.energy.end());
      for (std::size_t k = 1; k < r.time.size(); ++k)
        if (r.time[k - 1] >= 3e-10) CHECK(r.energy[k] <= r.energy[k - 1] + 1e-12 * peak);
    }
  }

  TEST_CASE("invalid arguments") {
    CHECK_THROWS_AS(transient_sim(stamp_example(), {PwlSource::step(1.0)}, 1.0, 0.0), InputError);
    CHECK_THROWS_AS(transient_sim(stamp_example(), {PwlSource::step(1.0)}, 1.0, -1.0), InputError);
    CHECK_THROWS_AS(transient_sim(stamp_example(), {PwlSource::step(1.0), PwlSource::step(1.0)}, 1.0, 0.1),
                    DimensionMismatch);
  }

  TEST_CASE("pwl interpolation") {
    const PwlSource s{{1.0, 2.0, 4.0}, {0.0, 2.0, -2.0}};
    CHECK(s.at(0.0) == 0.0);
    CHECK(s.at(1.5) == doctest::Approx(1.0));
    CHECK(s.at(3.0) == doctest::Approx(0.0));
    CHECK(s.at(9.0) == -2.0);
  }
}

TEST_SUITE("error metrics") {
  TEST_CASE("identical and offset waveforms") {
    const TransientResult r = transient_sim(stamp_example(), {PwlSource::step(1.0)}, 1.0, 0.1);
    const ErrorMetrics zero = error_metrics(r, r);
    CHECK(zero.global_max == 0.0);
    CHECK(zero.rms == 0.0);
    TransientResult shifted = r;
    shifted.y.array() += 1e-3;
    const ErrorMetrics e = error_metrics(r, shifted);
    CHECK(e.max_abs[0] == doctest::Approx(1e-3));
    CHECK(e.global_max == doctest::Approx(1e-3));
    CHECK(e.rms == doctest::Approx(1e-3));
  }

  TEST_CASE("grid mismatch is rejected") {
    const TransientResult a = transient_sim(stamp_example(), {PwlSource::step(1.0)}, 1.0, 0.1);
    const TransientResult b = transient_sim(stamp_example(), {PwlSource::step(1.0)}, 1.0, 0.05);
    CHECK_THROWS_AS(error_metrics(a, b), InputError);
  }
}

TEST_SUITE("waveform csv") {
  TEST_CASE("pwl sources from csv") {
    std::istringstream in("t,port1,port2\n0,0,1\n1e-9,1m,1\n2e-9,1m,0\n");
    const auto src = read_pwl_csv(in);
    REQUIRE(src.size() == 2);
    CHECK(src[0].at(0.5e-9) == doctest::Approx(0.5e-3));
    CHECK(src[1].at(1.5e-9) == doctest::Approx(0.5));
  }

  TEST_CASE("malformed csv") {
    std::istringstream no_t("x,port1\n0,1\n");
    CHECK_THROWS_AS(read_pwl_csv(no_t), ParseError);
    std::istringstream backwards("t,p\n1,0\n0,1\n");
    CHECK_THROWS_AS(read_pwl_csv(backwards), ParseError);
    std::istringstream ragged("t,p\n0,1,2\n");
    CHECK_THROWS_AS(read_pwl_csv(ragged), ParseError);
  }

  TEST_CASE("results round trip") {
    const TransientResult r = transient_sim(stamp_example(), {PwlSource::step(1.0)}, 1.0, 0.1);
    const std::string path = temp_path("wave.csv");
    write_waveform_csv_file(path, r, {"out"});
    const TransientResult back = read_waveform_csv_file(path);
    CHECK(back.time.size() == r.time.size());
    CHECK((back.y - r.y).cwiseAbs().maxCoeff() <= 1e-15);
  }
}
