// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "pixelwpt/rfc.hpp"

using namespace pixelwpt;
using Complex = std::complex<double>;

namespace {

PipelineContext desk_context(std::uint64_t seed = 1, int q = 6, int k = 6,
                             int rank = 3) {
  AntennaConfig acfg;
  RectennaParams rect;
  return make_context(synthesize_antenna(seed, q, k, rank, acfg), acfg, rect);
}

}  // namespace

TEST_CASE("svd beamformers on closed-form channels") {
  SUBCASE("identity channel") {
    const RfcBeamformers bf =
        svd_beamformers(Eigen::MatrixXcd::Identity(2, 2), 1.0);
    CHECK(std::abs(bf.gain - 2.0) < 1e-12);
  }
  SUBCASE("rank-one channel with known top singular value") {
    Eigen::VectorXcd u = oracles::random_complex_matrix(4, 1, 3).col(0);
    Eigen::VectorXcd v = oracles::random_complex_matrix(3, 1, 4).col(0);
    u.normalize();
    v.normalize();
    const Eigen::MatrixXcd h = 3.0 * u * v.adjoint();
    const RfcBeamformers bf = svd_beamformers(h, 1.0);
    CHECK(std::abs(bf.gain - 18.0) < 1e-9);
  }
  SUBCASE("zero channel is rejected") {
    CHECK_THROWS_AS(svd_beamformers(Eigen::MatrixXcd::Zero(2, 2), 1.0),
                    ZeroChannel);
  }
}

TEST_CASE("svd beamformer gain matches power iteration and direct evaluation") {
  for (int t = 0; t < 25; ++t) {
    const Eigen::MatrixXcd h = oracles::random_complex_matrix(4, 4, 600 + t);
    const double budget = 1.5;
    const RfcBeamformers bf = svd_beamformers(h, budget);
    const double sigma = oracles::power_iteration_sigma_max(h, 900 + t);
    const double want = 2.0 * budget * sigma * sigma;
    CHECK(std::abs(bf.gain - want) <= 1e-9 * want);
    const double direct = std::norm((bf.p_r.adjoint() * h * bf.p_t)(0, 0));
    CHECK(std::abs(direct - bf.gain) <= 1e-10 * bf.gain);
    CHECK(std::abs(0.5 * bf.p_t.squaredNorm() - budget) <= 1e-12 * budget);
    CHECK(std::abs(bf.p_r.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("svd beamformer phase convention is deterministic") {
  const Eigen::MatrixXcd h = oracles::random_complex_matrix(3, 3, 77);
  const RfcBeamformers bf = svd_beamformers(h, 1.0);
  Eigen::Index imax = 0;
  bf.p_t.cwiseAbs().maxCoeff(&imax);
  CHECK(bf.p_t(imax).imag() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(bf.p_t(imax).real() > 0.0);
}

TEST_CASE("sigma_max helper agrees with Jacobi SVD") {
  for (int rows : {1, 2, 3, 5}) {
    for (int cols : {1, 2, 4}) {
      const Eigen::MatrixXcd h =
          oracles::random_complex_matrix(rows, cols, rows * 10 + cols);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h);
      CHECK(std::abs(sigma_max(h) - svd.singularValues()(0)) <=
            1e-12 * svd.singularValues()(0));
    }
  }
}

TEST_CASE("binary rfc optimization") {
  const PipelineContext ctx = desk_context(21);
  const int ne = ctx.basis.n_eff;
  const BeamspaceChannel ch = sample_channel(61, 2 * ne, 2 * ne, 1e-3);
  RfcOptions opts;
  opts.sebo.rounds = 3;
  opts.sebo.block_size = 6;
  opts.sebo.rng_seed = 5;

  SUBCASE("dominates the fixed baseline") {
    SystemEvaluator ev(ctx, ch, 2, 2);
    const Eigen::MatrixXcd h0 =
        ev.effective_from_bits(std::vector<std::uint8_t>(24, 0));
    const RfcBeamformers bf0 = svd_beamformers(h0, 2.0);
    const double fixed = power_rfc(h0, bf0.p_t, bf0.p_r, ctx.rectenna);
    const RfcResult r = optimize_rfc_binary(ctx, ch, 2.0, opts);
    CHECK(r.power >= fixed * (1.0 - 1e-12));
    const RfcResult r2 = optimize_rfc_binary(ctx, ch, 2.0, opts);
    CHECK(r.power == r2.power);
  }

  SUBCASE("gain ranking matches the power ranking") {
    SystemEvaluator ev(ctx, ch, 2, 2);
    Philox rng(8, 0);
    std::vector<double> gains;
    std::vector<double> powers;
    for (int t = 0; t < 100; ++t) {
      std::vector<std::uint8_t> bits(24);
      for (auto& b : bits) b = static_cast<std::uint8_t>(rng.below(2));
      const Eigen::MatrixXcd h = ev.effective_from_bits(bits);
      if (!(h.cwiseAbs().maxCoeff() > 0.0)) continue;
      const RfcBeamformers bf = svd_beamformers(h, 2.0);
      gains.push_back(bf.gain);
      powers.push_back(power_rfc(h, bf.p_t, bf.p_r, ctx.rectenna));
    }
    std::vector<std::size_t> by_gain(gains.size());
    std::vector<std::size_t> by_power(gains.size());
    std::iota(by_gain.begin(), by_gain.end(), 0);
    std::iota(by_power.begin(), by_power.end(), 0);
    std::sort(by_gain.begin(), by_gain.end(),
              [&](std::size_t a, std::size_t b) { return gains[a] < gains[b]; });
    std::sort(by_power.begin(), by_power.end(), [&](std::size_t a, std::size_t b) {
      return powers[a] < powers[b];
    });
    CHECK(by_gain == by_power);
  }
}

TEST_CASE("tiny binary rfc search equals the exhaustive joint oracle") {
  const PipelineContext ctx = desk_context(22, 3, 4, 2);
  const int ne = ctx.basis.n_eff;
  RfcOptions opts;
  opts.sebo.block_size = 6;
  opts.sebo.rounds = 2;
  for (int trial = 0; trial < 5; ++trial) {
    const BeamspaceChannel ch = sample_channel(700 + trial, ne, ne, 1.0);
    const RfcResult got = optimize_rfc_binary(ctx, ch, 1.0, opts);
    SystemEvaluator ev(ctx, ch, 1, 1);
    auto gain = [&](const std::vector<std::uint8_t>& bits) {
      return 2.0 * std::norm(ev.effective_from_bits(bits)(0, 0));
    };
    const auto want = oracles::exhaustive_bits(gain, 6);
    CHECK(std::abs(got.beamformers.gain - want.second) <=
          1e-9 * std::max(want.second, 1e-300));
  }
}

TEST_CASE("continuous rfc optimization dominates binary") {
  const PipelineContext ctx = desk_context(23);
  const int ne = ctx.basis.n_eff;
  const BeamspaceChannel ch = sample_channel(63, 2 * ne, 2 * ne, 1e-3);
  RfcOptions opts;
  opts.sebo.rounds = 2;
  opts.sebo.rng_seed = 6;
  opts.qn.restarts = 3;
  opts.qn.max_iters = 40;
  opts.qn.rng_seed = 7;
  const RfcResult binary = optimize_rfc_binary(ctx, ch, 2.0, opts);
  const RfcResult cont = optimize_rfc_continuous(ctx, ch, 2.0, opts, &binary);
  CHECK(cont.beamformers.gain >= binary.beamformers.gain * (1.0 - 1e-12));
  CHECK(cont.power >= binary.power * (1.0 - 1e-12));
  const RfcResult cont2 = optimize_rfc_continuous(ctx, ch, 2.0, opts, &binary);
  CHECK(cont.power == cont2.power);
}

TEST_CASE("abf iteration") {
  SUBCASE("single receive antenna equals the svd gain") {
    const Eigen::MatrixXcd h = oracles::random_complex_matrix(1, 3, 31);
    const AbfResult abf = abf_receive_beamforming(h, 1.0, 1e-10, 200);
    const RfcBeamformers svd = svd_beamformers(h, 1.0);
    CHECK(std::abs(abf.beamformers.gain - svd.gain) <= 1e-9 * svd.gain);
  }

  SUBCASE("rank-one channel with equal-magnitude left vector closes the gap") {
    const int n = 4;
    Philox rng(32, 0);
    Eigen::VectorXcd u(n);
    for (int i = 0; i < n; ++i)
      u(i) = std::polar(1.0 / std::sqrt(double(n)), rng.uniform(0.0, 6.28));
    Eigen::VectorXcd v = oracles::random_complex_matrix(3, 1, 33).col(0);
    v.normalize();
    const Eigen::MatrixXcd h = 2.0 * u * v.adjoint();
    const AbfResult abf = abf_receive_beamforming(h, 1.0, 1e-12, 500);
    const RfcBeamformers svd = svd_beamformers(h, 1.0);
    CHECK(std::abs(abf.beamformers.gain - svd.gain) <= 1e-9 * svd.gain);
  }

  SUBCASE("monotone, unit modulus, below the svd gain, fixed point") {
    for (int t = 0; t < 25; ++t) {
      const Eigen::MatrixXcd h = oracles::random_complex_matrix(4, 4, 800 + t);
      double prev = -1.0;
      const AbfResult abf = abf_receive_beamforming(
          h, 1.0, 1e-13, 5000, nullptr, [&](double r0sq) {
            if (prev >= 0.0)
              CHECK(r0sq >= prev - 1e-12 * std::max(prev, 1e-300));
            prev = r0sq;
          });
      const double mag = 1.0 / 2.0;  // 1/sqrt(4)
      for (int i = 0; i < 4; ++i)
        CHECK(std::abs(std::abs(abf.beamformers.p_r(i)) - mag) < 1e-14);
      const RfcBeamformers svd = svd_beamformers(h, 1.0);
      CHECK(abf.beamformers.gain <= svd.gain * (1.0 + 1e-9));
      // Fixed point of the phase update, evaluated exactly as the
      // iteration evaluates it.
      const Eigen::MatrixXcd gram = h * h.adjoint();
      const Eigen::VectorXcd z = gram * abf.beamformers.p_r;
      for (int i = 0; i < 4; ++i) {
        if (std::abs(z(i)) > 1e-9 * z.norm()) {
          double diff = std::arg(abf.beamformers.p_r(i)) - std::arg(z(i));
          while (diff > 3.141592653589793) diff -= 2 * 3.141592653589793;
          while (diff < -3.141592653589793) diff += 2 * 3.141592653589793;
          CHECK(std::abs(diff) < 1e-8);
        }
      }
    }
  }

  SUBCASE("zero channel is rejected") {
    CHECK_THROWS_AS(
        abf_receive_beamforming(Eigen::MatrixXcd::Zero(2, 2), 1.0, 1e-9, 10),
        ZeroChannel);
  }
}

TEST_CASE("binary abf optimization") {
  const PipelineContext ctx = desk_context(24);
  const int ne = ctx.basis.n_eff;
  const BeamspaceChannel ch = sample_channel(65, 2 * ne, 2 * ne, 1e-3);
  RfcOptions opts;
  opts.sebo.rounds = 2;
  opts.sebo.block_size = 6;
  opts.sebo.rng_seed = 9;
  opts.outer_max_iter = 6;

  SUBCASE("dominates the fixed baseline") {
    SystemEvaluator ev(ctx, ch, 2, 2);
    const Eigen::MatrixXcd h0 =
        ev.effective_from_bits(std::vector<std::uint8_t>(24, 0));
    const AbfResult abf0 =
        abf_receive_beamforming(h0, 2.0, opts.abf_tol, opts.abf_max_iter);
    const double fixed =
        power_rfc(h0, abf0.beamformers.p_t, abf0.beamformers.p_r, ctx.rectenna);
    const RfcResult r = optimize_abf_binary(ctx, ch, 2.0, opts);
    CHECK(r.power >= fixed * (1.0 - 1e-12));
    for (int i = 0; i < 2; ++i)
      CHECK(std::abs(std::abs(r.beamformers.p_r(i)) - 1.0 / std::sqrt(2.0)) <
            1e-12);
    const RfcResult r2 = optimize_abf_binary(ctx, ch, 2.0, opts);
    CHECK(r.power == r2.power);
  }

  SUBCASE("abf is a restriction of general rfc at exhaustive scale") {
    const PipelineContext tiny = desk_context(25, 3, 4, 2);
    const int tne = tiny.basis.n_eff;
    RfcOptions topts;
    topts.sebo.block_size = 6;
    topts.sebo.rounds = 2;
    topts.outer_max_iter = 8;
    for (int trial = 0; trial < 5; ++trial) {
      const BeamspaceChannel tch = sample_channel(900 + trial, tne, tne, 1.0);
      const RfcResult rfc = optimize_rfc_binary(tiny, tch, 1.0, topts);
      const RfcResult abf = optimize_abf_binary(tiny, tch, 1.0, topts);
      CHECK(abf.beamformers.gain <= rfc.beamformers.gain * (1.0 + 1e-9));
      CHECK(abf.power <= rfc.power * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("continuous abf optimization dominates binary abf") {
  const PipelineContext ctx = desk_context(26);
  const int ne = ctx.basis.n_eff;
  const BeamspaceChannel ch = sample_channel(67, 2 * ne, 2 * ne, 1e-3);
  RfcOptions opts;
  opts.sebo.rounds = 2;
  opts.sebo.rng_seed = 10;
  opts.qn.restarts = 2;
  opts.qn.max_iters = 30;
  opts.qn.rng_seed = 11;
  opts.outer_max_iter = 3;
  const RfcResult binary = optimize_abf_binary(ctx, ch, 2.0, opts);
  const RfcResult cont = optimize_abf_continuous(ctx, ch, 2.0, opts, &binary);
  CHECK(cont.beamformers.gain >= binary.beamformers.gain * (1.0 - 1e-12));
}
