// SPDX-License-Identifier: Apache-2.0
//
// pixelwpt: pixel-antenna MIMO wireless power transfer simulation library

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "pixelwpt/errors.hpp"

namespace pixelwpt {

/// Warm-start SEBO: cyclic exhaustive search over contiguous bit blocks of
/// size J, repeated for W rounds with greedy random bit flips between rounds.
struct SeboConfig {
  int block_size = 10;  // J
  int rounds = 20;      // W
  int flip_count = -1;  // random flips per round; < 0 means n_bits / 4
  int max_sweeps = 0;   // block sweeps per round; 0 means until no improvement
  std::uint64_t rng_seed = 0;
};

struct SeboResult {
  std::vector<std::uint8_t> bits;
  double value = 0.0;
};

using BitObjective = std::function<double(const std::vector<std::uint8_t>&)>;

/// Maximizes `objective` over {0,1}^n_bits starting from `init`. The returned
/// value equals objective(returned bits) and never falls below
/// objective(init). With block_size >= n_bits a single sweep is exhaustive,
/// so the result is the global maximum. Ties inside a block go to the lowest
/// binary block value; flips are accepted only on strict improvement.
SeboResult sebo_maximize(const BitObjective& objective, int n_bits,
                         const std::vector<std::uint8_t>& init,
                         const SeboConfig& cfg);

/// Multi-start BFGS ascent with central finite-difference gradients
/// (step gradient_step * (1 + |x_i|)).
struct QuasiNewtonConfig {
  int restarts = 10;
  double init_lo = -50.0;
  double init_hi = 50.0;
  double gradient_step = 1e-4;
  double tolerance = 1e-6;  // gradient norm stop
  int max_iters = 100;
  std::uint64_t rng_seed = 0;
};

struct QuasiNewtonResult {
  Eigen::VectorXd x;
  double value = 0.0;
};

using RealObjective = std::function<double(const Eigen::VectorXd&)>;

/// Maximizes `objective` over R^dim; runs every vector in `extra_starts`
/// plus `restarts` random points in [init_lo, init_hi]^dim and returns the
/// best. Line-search steps are accepted only when they increase the
/// objective, so the result dominates every start.
QuasiNewtonResult quasi_newton_maximize(
    const RealObjective& objective, int dim, const QuasiNewtonConfig& cfg,
    const std::vector<Eigen::VectorXd>& extra_starts = {});

}  // namespace pixelwpt
