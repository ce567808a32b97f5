// SPDX-License-Identifier: Apache-2.0
//
// pixelwpt: pixel-antenna MIMO wireless power transfer simulation library

#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "pixelwpt/antenna.hpp"
#include "pixelwpt/channel.hpp"
#include "pixelwpt/rectenna.hpp"

namespace pixelwpt {

/// Everything fixed for one experiment: the (shared, identical) pixel
/// antenna, its pattern basis, and the rectifier constants.
struct PipelineContext {
  MultiportNetwork antenna;
  PatternBasis basis;
  AntennaConfig antenna_cfg;
  RectennaParams rectenna;
};

PipelineContext make_context(MultiportNetwork antenna, AntennaConfig acfg,
                             RectennaParams rect);

/// Memo of binary pattern coders keyed by the packed coder bits. All pixel
/// antennas are identical, so one cache per side serves every antenna. Not
/// shareable across threads while being filled; optimizers own one per run.
class CoderCache {
 public:
  CoderCache(const PipelineContext& ctx, Side side);
  const Eigen::VectorXcd& lookup(std::uint64_t bits);

 private:
  const PipelineContext* ctx_;
  Side side_;
  std::unordered_map<std::uint64_t, Eigen::VectorXcd> map_;
};

// Concatenated bit layout for joint coder searches: the M transmit coders
// first (one Q-bit run per antenna), then the N receive coders. The stacked
// reactance layout matches.
std::vector<std::uint8_t> pack_coders(const CoderMatrix& b_t,
                                      const CoderMatrix& b_r);
std::pair<CoderMatrix, CoderMatrix> unpack_coders(
    const std::vector<std::uint8_t>& bits, int q, int m, int n);
Eigen::VectorXd stack_reactances(const Eigen::MatrixXd& x_t,
                                 const Eigen::MatrixXd& x_r);
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> unstack_reactances(
    const Eigen::VectorXd& x, int q, int m, int n);

/// Run-local machinery turning coder bits or raw reactances into the
/// effective N x M channel for one fixed beamspace channel realization.
/// The returned matrix references an internal buffer that the next call
/// overwrites.
class SystemEvaluator {
 public:
  SystemEvaluator(const PipelineContext& ctx, const BeamspaceChannel& ch,
                  int m, int n);

  int m() const { return m_; }
  int n() const { return n_; }
  int q() const { return ctx_->antenna.q; }
  int total_bits() const { return (m_ + n_) * q(); }
  const PipelineContext& context() const { return *ctx_; }

  const Eigen::MatrixXcd& effective_from_bits(
      const std::vector<std::uint8_t>& bits);
  const Eigen::MatrixXcd& effective_from_reactances(const Eigen::VectorXd& x);

 private:
  const PipelineContext* ctx_;
  int m_;
  int n_;
  int ne_;
  std::vector<Eigen::MatrixXcd> blocks_;  // n_ * m_ blocks of H_C, ne x ne
  CoderCache tx_cache_;
  CoderCache rx_cache_;
  std::vector<const Eigen::VectorXcd*> wt_;
  std::vector<const Eigen::VectorXcd*> wr_;
  std::vector<Eigen::VectorXcd> wt_val_;
  std::vector<Eigen::VectorXcd> wr_val_;
  Eigen::VectorXcd tmp_;
  Eigen::MatrixXcd h_;
};

}  // namespace pixelwpt
