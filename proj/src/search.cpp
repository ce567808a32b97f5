// SPDX-License-Identifier: Apache-2.0
//
// pixelwpt: pixel-antenna MIMO wireless power transfer simulation library

#include "pixelwpt/search.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pixelwpt/rng.hpp"

namespace pixelwpt {

namespace {

std::string bits_to_string(const std::vector<std::uint8_t>& bits) {
  std::string s;
  s.reserve(bits.size());
  for (std::uint8_t b : bits) s.push_back(b ? '1' : '0');
  return s;
}

double checked_eval(const BitObjective& objective,
                    const std::vector<std::uint8_t>& bits) {
  const double v = objective(bits);
  if (!std::isfinite(v))
    throw ObjectiveNonFinite("objective returned non-finite value at bits " +
                             bits_to_string(bits));
  return v;
}

}  // namespace

SeboResult sebo_maximize(const BitObjective& objective, int n_bits,
                         const std::vector<std::uint8_t>& init,
                         const SeboConfig& cfg) {
  if (n_bits < 1) throw Error("sebo: n_bits must be >= 1");
  if (cfg.block_size < 1 || cfg.block_size > 30)
    throw Error("sebo: block_size must lie in [1, 30]");
  if (cfg.rounds < 1) throw Error("sebo: rounds must be >= 1");
  if (static_cast<int>(init.size()) != n_bits)
    throw DimensionMismatch("sebo: init length differs from n_bits");
  for (std::uint8_t b : init)
    if (b > 1) throw Error("sebo: init entries must be 0 or 1");

  std::vector<std::uint8_t> state = init;
  double best = checked_eval(objective, state);

  Philox rng(cfg.rng_seed, kStreamSebo);
  const int flips = cfg.flip_count >= 0 ? cfg.flip_count : n_bits / 4;
  const int n_blocks = (n_bits + cfg.block_size - 1) / cfg.block_size;
  std::vector<std::uint8_t> cand(state);

  for (int round = 0; round < cfg.rounds; ++round) {
    int sweeps = 0;
    bool improved = true;
    while (improved && (cfg.max_sweeps <= 0 || sweeps < cfg.max_sweeps)) {
      improved = false;
      ++sweeps;
      for (int blk = 0; blk < n_blocks; ++blk) {
        const int lo = blk * cfg.block_size;
        const int width = std::min(cfg.block_size, n_bits - lo);
        cand = state;
        double blk_best = -std::numeric_limits<double>::infinity();
        std::uint64_t blk_arg = 0;
        const std::uint64_t count = std::uint64_t{1} << width;
        for (std::uint64_t v = 0; v < count; ++v) {
          for (int i = 0; i < width; ++i)
            cand[lo + i] = static_cast<std::uint8_t>((v >> i) & 1u);
          const double f = checked_eval(objective, cand);
          if (f > blk_best) {
            blk_best = f;
            blk_arg = v;
          }
        }
        // The incumbent's block value is among the candidates, so blk_best
        // never falls below the incumbent objective.
        for (int i = 0; i < width; ++i)
          state[lo + i] = static_cast<std::uint8_t>((blk_arg >> i) & 1u);
        if (blk_best > best) improved = true;
        best = blk_best;
      }
    }
    for (int t = 0; t < flips; ++t) {
      const int idx = static_cast<int>(rng.below(n_bits));
      cand = state;
      cand[idx] ^= 1u;
      const double f = checked_eval(objective, cand);
      if (f > best) {
        state = cand;
        best = f;
      }
    }
  }
  return {std::move(state), best};
}

namespace {

Eigen::VectorXd fd_gradient(const RealObjective& objective,
                            const Eigen::VectorXd& x, double base_step) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = base_step * (1.0 + std::abs(x(i)));
    probe(i) = x(i) + h;
    const double fp = objective(probe);
    probe(i) = x(i) - h;
    const double fm = objective(probe);
    probe(i) = x(i);
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw ObjectiveNonFinite("objective non-finite in gradient probe");
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

QuasiNewtonResult bfgs_ascent(const RealObjective& objective,
                              const Eigen::VectorXd& x0,
                              const QuasiNewtonConfig& cfg) {
  const Eigen::Index dim = x0.size();
  Eigen::VectorXd x = x0;
  double f = objective(x);
  if (!std::isfinite(f))
    throw ObjectiveNonFinite("objective non-finite at initial point");
  Eigen::VectorXd g = fd_gradient(objective, x, cfg.gradient_step);
  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(dim, dim);
  bool first_update = true;

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    if (g.norm() <= cfg.tolerance) break;
    Eigen::VectorXd d = h_inv * g;
    double gd = g.dot(d);
    if (!(gd > 0.0)) {  // not an ascent direction; reset curvature
      h_inv.setIdentity();
      d = g;
      gd = g.squaredNorm();
      if (!(gd > 0.0)) break;
    }
    double alpha = 1.0;
    bool accepted = false;
    Eigen::VectorXd xn;
    double fn = f;
    while (alpha >= 1e-12) {
      xn = x + alpha * d;
      fn = objective(xn);
      if (std::isfinite(fn) && fn >= f + 1e-4 * alpha * gd) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    const Eigen::VectorXd gn = fd_gradient(objective, xn, cfg.gradient_step);
    const Eigen::VectorXd s = xn - x;
    const Eigen::VectorXd u = g - gn;  // curvature pair for the descent form
    const double su = s.dot(u);
    if (su > 1e-12 * s.norm() * u.norm()) {
      if (first_update) {
        // Shanno scaling recovers the objective's scale so badly scaled
        // problems take sensible steps from the second iteration on.
        h_inv *= su / u.squaredNorm();
        first_update = false;
      }
      const double rho = 1.0 / su;
      const Eigen::MatrixXd left =
          Eigen::MatrixXd::Identity(dim, dim) - rho * s * u.transpose();
      h_inv = left * h_inv * left.transpose() + rho * s * s.transpose();
    }
    x = xn;
    f = fn;
    g = gn;
  }
  return {std::move(x), f};
}

}  // namespace

QuasiNewtonResult quasi_newton_maximize(
    const RealObjective& objective, int dim, const QuasiNewtonConfig& cfg,
    const std::vector<Eigen::VectorXd>& extra_starts) {
  if (dim < 1) throw Error("quasi_newton: dim must be >= 1");
  if (cfg.restarts < 1) throw Error("quasi_newton: restarts must be >= 1");
  if (!(cfg.init_lo <= cfg.init_hi))
    throw Error("quasi_newton: empty init range");
  if (!(cfg.gradient_step > 0.0) || !(cfg.tolerance > 0.0))
    throw Error("quasi_newton: steps and tolerance must be positive");

  Philox rng(cfg.rng_seed, kStreamQuasiNewton);
  QuasiNewtonResult best;
  bool have_best = false;
  auto consider = [&](const Eigen::VectorXd& start) {
    if (start.size() != dim)
      throw DimensionMismatch("quasi_newton: start length differs from dim");
    QuasiNewtonResult r = bfgs_ascent(objective, start, cfg);
    if (!have_best || r.value > best.value) {
      best = std::move(r);
      have_best = true;
    }
  };
  for (const Eigen::VectorXd& start : extra_starts) consider(start);
  for (int t = 0; t < cfg.restarts; ++t) {
    Eigen::VectorXd start(dim);
    for (int i = 0; i < dim; ++i)
      start(i) = rng.uniform(cfg.init_lo, cfg.init_hi);
    consider(start);
  }
  return best;
}

}  // namespace pixelwpt
