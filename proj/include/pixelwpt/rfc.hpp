// SPDX-License-Identifier: Apache-2.0
//
// pixelwpt: pixel-antenna MIMO wireless power transfer simulation library

#pragma once

#include <functional>

#include <Eigen/Dense>

#include "pixelwpt/search.hpp"
#include "pixelwpt/system.hpp"

namespace pixelwpt {

struct RfcBeamformers {
  Eigen::VectorXcd p_t;
  Eigen::VectorXcd p_r;
  double gain = 0.0;  // channel gain |p_r^H H p_t|^2
};

/// Top singular value of H; closed forms for the 1- and 2-dimensional Gram
/// cases, Jacobi SVD otherwise.
double sigma_max(const Eigen::MatrixXcd& h);

/// Optimal RFC beamformers from the dominant singular pair:
/// p_t = sqrt(2P) v_1, p_r = u_1, gain = 2P sigma_max^2. The pair's global
/// phase is fixed so the largest-magnitude entry of v_1 is real positive.
RfcBeamformers svd_beamformers(const Eigen::MatrixXcd& h, double power_budget);

struct AbfResult {
  RfcBeamformers beamformers;
  int iterations = 0;
};

/// Phase-only receive beamforming (Algorithm: iterate
/// p_r <- (1/sqrt(N)) exp(j arg(H H^H p_r)) until the beamformer or the
/// objective stops moving). Entries with a vanishing argument keep their
/// previous phase. The final transmit beamformer is MRT against p_r.
AbfResult abf_receive_beamforming(
    const Eigen::MatrixXcd& h, double power_budget, double tol, int max_iter,
    const Eigen::VectorXcd* init = nullptr,
    const std::function<void(double)>& on_iterate = {});

struct RfcOptions {
  SeboConfig sebo;
  QuasiNewtonConfig qn;
  double abf_tol = 1e-9;
  int abf_max_iter = 500;
  double outer_tol = 1e-6;
  int outer_max_iter = 30;
};

struct RfcResult {
  CoderMatrix b_t;
  CoderMatrix b_r;
  Eigen::MatrixXd x_t;  // continuous runs only
  Eigen::MatrixXd x_r;
  RfcBeamformers beamformers;
  double power = 0.0;
  int outer_iterations = 0;
};

/// SEBO over the concatenated coder bits with objective 2P sigma_max^2;
/// the final power runs the SVD beamformers through the rectenna.
RfcResult optimize_rfc_binary(const PipelineContext& ctx,
                              const BeamspaceChannel& ch, double power_budget,
                              const RfcOptions& opts,
                              const CoderMatrix* init_bt = nullptr,
                              const CoderMatrix* init_br = nullptr);

/// Quasi-Newton ascent on the sigma_max^2 objective over raw reactances,
/// with the binary solution among the starts.
RfcResult optimize_rfc_continuous(const PipelineContext& ctx,
                                  const BeamspaceChannel& ch,
                                  double power_budget, const RfcOptions& opts,
                                  const RfcResult* binary_incumbent = nullptr);

/// Alternates ABF (coders fixed) with SEBO on 2P ||p_r^H H(B)||^2 (receive
/// beamformer fixed, transmit beamformer implicitly MRT).
RfcResult optimize_abf_binary(const PipelineContext& ctx,
                              const BeamspaceChannel& ch, double power_budget,
                              const RfcOptions& opts,
                              const CoderMatrix* init_bt = nullptr,
                              const CoderMatrix* init_br = nullptr);

/// ABF with continuous coding via quasi-Newton over raw reactances.
RfcResult optimize_abf_continuous(const PipelineContext& ctx,
                                  const BeamspaceChannel& ch,
                                  double power_budget, const RfcOptions& opts,
                                  const RfcResult* binary_incumbent = nullptr);

}  // namespace pixelwpt
