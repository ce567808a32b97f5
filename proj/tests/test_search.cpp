// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "pixelwpt/search.hpp"

using namespace pixelwpt;

namespace {

double popcount_objective(const std::vector<std::uint8_t>& bits) {
  double s = 0.0;
  for (std::uint8_t b : bits) s += b;
  return s;
}

std::vector<double> random_table(int n_bits, std::uint64_t seed) {
  Philox rng(seed, 0);
  std::vector<double> table(std::size_t{1} << n_bits);
  for (double& v : table) v = rng.uniform(-1.0, 1.0);
  return table;
}

double table_lookup(const std::vector<double>& table,
                    const std::vector<std::uint8_t>& bits) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < bits.size(); ++i)
    idx |= static_cast<std::size_t>(bits[i]) << i;
  return table[idx];
}

}  // namespace

TEST_CASE("sebo solves a separable objective in one sweep") {
  SeboConfig cfg;
  cfg.block_size = 8;
  cfg.rounds = 1;
  const SeboResult r =
      sebo_maximize(popcount_objective, 8, std::vector<std::uint8_t>(8, 0), cfg);
  CHECK(r.value == 8.0);
  for (std::uint8_t b : r.bits) CHECK(b == 1);
}

TEST_CASE("sebo with a full-width block is an exhaustive search") {
  for (int inst = 0; inst < 20; ++inst) {
    const auto table = random_table(10, 100 + inst);
    auto f = [&](const std::vector<std::uint8_t>& bits) {
      return table_lookup(table, bits);
    };
    SeboConfig cfg;
    cfg.block_size = 10;
    cfg.rounds = 1;
    cfg.rng_seed = inst;
    const SeboResult got =
        sebo_maximize(f, 10, std::vector<std::uint8_t>(10, 0), cfg);
    const auto want = oracles::exhaustive_bits(f, 10);
    CHECK(got.value == want.second);
    CHECK(got.bits == want.first);
  }
}

TEST_CASE("sebo returns an optimal init unchanged") {
  const auto table = random_table(8, 9);
  auto f = [&](const std::vector<std::uint8_t>& bits) {
    return table_lookup(table, bits);
  };
  const auto opt = oracles::exhaustive_bits(f, 8);
  SeboConfig cfg;
  cfg.block_size = 4;
  cfg.rounds = 3;
  const SeboResult r = sebo_maximize(f, 8, opt.first, cfg);
  CHECK(r.bits == opt.first);
  CHECK(r.value == opt.second);
}

TEST_CASE("sebo result value matches re-evaluation and dominates the init") {
  const auto table = random_table(12, 13);
  auto f = [&](const std::vector<std::uint8_t>& bits) {
    return table_lookup(table, bits);
  };
  std::vector<std::uint8_t> init(12, 0);
  init[3] = init[7] = 1;
  SeboConfig cfg;
  cfg.block_size = 5;
  cfg.rounds = 4;
  cfg.rng_seed = 2;
  const SeboResult r = sebo_maximize(f, 12, init, cfg);
  CHECK(r.value == f(r.bits));
  CHECK(r.value >= f(init));
}

TEST_CASE("sebo warm-start rounds never lose ground") {
  const auto table = random_table(12, 31);
  auto f = [&](const std::vector<std::uint8_t>& bits) {
    return table_lookup(table, bits);
  };
  SeboConfig cfg;
  cfg.block_size = 4;
  cfg.rng_seed = 5;
  double prev = -1e9;
  for (int rounds = 1; rounds <= 6; ++rounds) {
    cfg.rounds = rounds;
    const SeboResult r =
        sebo_maximize(f, 12, std::vector<std::uint8_t>(12, 0), cfg);
    CHECK(r.value >= prev);
    prev = r.value;
  }
}

TEST_CASE("sebo rejects non-finite objectives with the offending bits") {
  auto f = [](const std::vector<std::uint8_t>& bits) {
    return bits[0] ? std::numeric_limits<double>::quiet_NaN() : 0.0;
  };
  SeboConfig cfg;
  cfg.block_size = 2;
  cfg.rounds = 1;
  CHECK_THROWS_AS(
      sebo_maximize(f, 2, std::vector<std::uint8_t>(2, 0), cfg),
      ObjectiveNonFinite);
}

TEST_CASE("sebo is deterministic under a fixed seed") {
  const auto table = random_table(12, 77);
  auto f = [&](const std::vector<std::uint8_t>& bits) {
    return table_lookup(table, bits);
  };
  SeboConfig cfg;
  cfg.block_size = 3;
  cfg.rounds = 5;
  cfg.rng_seed = 11;
  const SeboResult a =
      sebo_maximize(f, 12, std::vector<std::uint8_t>(12, 0), cfg);
  const SeboResult b =
      sebo_maximize(f, 12, std::vector<std::uint8_t>(12, 0), cfg);
  CHECK(a.bits == b.bits);
  CHECK(a.value == b.value);
}

TEST_CASE("quasi-newton climbs a quadratic bowl") {
  Eigen::VectorXd c(3);
  c << 1.5, -2.0, 0.25;
  auto f = [&](const Eigen::VectorXd& x) { return -(x - c).squaredNorm(); };
  QuasiNewtonConfig cfg;
  cfg.restarts = 3;
  cfg.rng_seed = 1;
  const QuasiNewtonResult r = quasi_newton_maximize(f, 3, cfg);
  CHECK((r.x - c).norm() < 1e-6);
}

TEST_CASE("quasi-newton finds the global optimum of a quartic") {
  auto f = [](const Eigen::VectorXd& x) {
    const double t = x(0) * x(0) - 1.0;
    return -t * t;
  };
  QuasiNewtonConfig cfg;
  cfg.restarts = 10;
  cfg.rng_seed = 3;
  cfg.max_iters = 200;
  const QuasiNewtonResult r = quasi_newton_maximize(f, 1, cfg);
  // Dense 1-D grid oracle.
  double best = -1e300;
  for (int i = 0; i <= 100000; ++i) {
    Eigen::VectorXd x(1);
    x(0) = -50.0 + 100.0 * i / 100000.0;
    best = std::max(best, f(x));
  }
  CHECK(r.value >= best - 1e-8);
  CHECK(std::abs(std::abs(r.x(0)) - 1.0) < 1e-4);
}

TEST_CASE("quasi-newton restarts are deterministic") {
  auto f = [](const Eigen::VectorXd& x) { return -x.squaredNorm(); };
  QuasiNewtonConfig cfg;
  cfg.restarts = 1;
  cfg.rng_seed = 9;
  const QuasiNewtonResult a = quasi_newton_maximize(f, 4, cfg);
  const QuasiNewtonResult b = quasi_newton_maximize(f, 4, cfg);
  CHECK((a.x - b.x).norm() == 0.0);
  CHECK(a.value == b.value);
}

TEST_CASE("quasi-newton dominates every supplied start") {
  auto f = [](const Eigen::VectorXd& x) {
    return std::sin(x(0)) - 0.01 * x.squaredNorm();
  };
  QuasiNewtonConfig cfg;
  cfg.restarts = 2;
  cfg.rng_seed = 4;
  std::vector<Eigen::VectorXd> starts;
  for (double v : {-20.0, 3.0, 40.0}) {
    Eigen::VectorXd x(1);
    x(0) = v;
    starts.push_back(x);
  }
  const QuasiNewtonResult r = quasi_newton_maximize(f, 1, cfg, starts);
  for (const auto& s : starts) CHECK(r.value >= f(s));
}

TEST_CASE("quasi-newton rejects a non-finite start") {
  auto f = [](const Eigen::VectorXd& x) {
    return x(0) > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  };
  QuasiNewtonConfig cfg;
  cfg.restarts = 1;
  cfg.rng_seed = 2;
  std::vector<Eigen::VectorXd> starts;
  Eigen::VectorXd x(1);
  x(0) = 5.0;
  starts.push_back(x);
  CHECK_THROWS_AS(quasi_newton_maximize(f, 1, cfg, starts), ObjectiveNonFinite);
}
