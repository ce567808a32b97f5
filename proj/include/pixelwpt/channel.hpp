// SPDX-License-Identifier: Apache-2.0
//
// pixelwpt: pixel-antenna MIMO wireless power transfer simulation library

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pixelwpt/antenna.hpp"

namespace pixelwpt {

/// One antenna coder per pixel antenna (M transmit or N receive columns),
/// all sharing one length Q and one mode.
struct CoderMatrix {
  std::vector<AntennaCoder> columns;
};

/// i.i.d. beamspace channel between the M*N_eff equivalent transmit ports
/// and N*N_eff equivalent receive ports. `h_c` already carries the path-loss
/// amplitude factor recorded in `amplitude_scale`.
struct BeamspaceChannel {
  Eigen::MatrixXcd h_c;
  double amplitude_scale = 1.0;
};

/// Angle-domain channel between all AoD/AoA pairs (2K x 2K).
struct VirtualChannel {
  Eigen::MatrixXcd h_v;
};

void validate(const CoderMatrix& coders);

/// Draws each entry CN(0,1) scaled by `amplitude_scale`, filling row by row
/// so channels with a shared seed nest as n_r grows (paired sweeps).
BeamspaceChannel sample_channel(std::uint64_t rng_seed, int n_r, int n_t,
                                double amplitude_scale);

/// Block-diagonal pattern-coder matrix blkdiag(w_1, ..., w_count); column a
/// holds antenna a's unit-norm pattern coder in rows [a*N_eff, (a+1)*N_eff).
Eigen::MatrixXcd assemble_pattern_coders(const CoderMatrix& coders,
                                         const MultiportNetwork& net,
                                         const PatternBasis& basis,
                                         const AntennaConfig& cfg, Side side);

/// Effective N x M channel W_R^H H_C W_T.
Eigen::MatrixXcd effective_channel(const BeamspaceChannel& ch,
                                   const Eigen::MatrixXcd& w_t,
                                   const Eigen::MatrixXcd& w_r);

/// H_C = E_bs_R^T H_V E_bs_T where E_bs stacks the per-antenna basis
/// patterns [U_1, ..., U_M]. Note the transpose (not adjoint) on the receive
/// side.
BeamspaceChannel virtual_to_beamspace(const VirtualChannel& hv,
                                      const std::vector<PatternBasis>& tx,
                                      const std::vector<PatternBasis>& rx);

std::string channel_to_json_text(const BeamspaceChannel& ch);
BeamspaceChannel channel_from_json_text(const std::string& text);

}  // namespace pixelwpt
