// SPDX-License-Identifier: Apache-2.0
//
// pixelwpt: pixel-antenna MIMO wireless power transfer simulation library

#pragma once

#include <functional>

#include <Eigen/Dense>

#include "pixelwpt/search.hpp"
#include "pixelwpt/system.hpp"

namespace pixelwpt {

/// One SCA iterate: the closed-form beamformer update, the auxiliary branch
/// gains r_n = |h_n p_t|^2 recomputed at the new beamformer, and the ascent
/// direction the update was built from.
struct ScaIterate {
  Eigen::VectorXcd p_t;
  Eigen::VectorXd r;
  Eigen::VectorXcd a;
  double objective = 0.0;
};

struct ScaResult {
  Eigen::VectorXcd p_t;
  double objective = 0.0;
  int iterations = 0;
  bool zero_direction = false;  // ascent direction vanished; p_t is the init
};

/// Closed-form SCA for the DCC transmit beamformer. Each iterate is
/// p_t = sqrt(2P) a / ||a||, so the power constraint is tight at every step
/// and the objective never decreases. `init` only fixes the starting
/// direction; it is rescaled onto the power boundary. Default init is the
/// conjugate of the largest-norm channel row.
ScaResult sca_transmit_beamforming(
    const Eigen::MatrixXcd& h, double power_budget, const RectennaParams& p,
    double tol, int max_iter, const Eigen::VectorXcd* init = nullptr,
    const std::function<void(const ScaIterate&)>& on_iterate = {});

/// Full pipeline composition: coders -> pattern coders -> effective channel
/// -> DCC output power, through the public module operations.
double power_dcc_of_coders(const CoderMatrix& b_t, const CoderMatrix& b_r,
                           const BeamspaceChannel& ch,
                           const Eigen::VectorXcd& p_t,
                           const PipelineContext& ctx);

struct DccOptions {
  SeboConfig sebo;
  QuasiNewtonConfig qn;
  double sca_tol = 1e-8;
  int sca_max_iter = 200;
  double outer_tol = 1e-6;
  int outer_max_iter = 30;
};

struct DccResult {
  Eigen::VectorXcd p_t;
  CoderMatrix b_t;
  CoderMatrix b_r;
  Eigen::MatrixXd x_t;  // continuous runs only
  Eigen::MatrixXd x_r;
  double power = 0.0;
  int outer_iterations = 0;
};

/// Alternates SCA transmit beamforming and SEBO over the concatenated
/// (B_T, B_R) bits until the objective change drops below outer_tol or
/// outer_max_iter is hit. The objective never decreases across steps; the
/// result dominates the (default all-zeros) starting coders.
DccResult optimize_dcc_binary(const PipelineContext& ctx,
                              const BeamspaceChannel& ch, double power_budget,
                              const DccOptions& opts,
                              const CoderMatrix* init_bt = nullptr,
                              const CoderMatrix* init_br = nullptr);

/// Alternates SCA beamforming and multi-start quasi-Newton ascent over the
/// stacked raw reactances. The start set contains the binary incumbent
/// mapped to reactances (computed here when not supplied), so the returned
/// power dominates the binary solution. Reported coders are
/// clamp(|x|/x_oc, 0, 1); the physics is evaluated on the raw reactances.
DccResult optimize_dcc_continuous(const PipelineContext& ctx,
                                  const BeamspaceChannel& ch,
                                  double power_budget, const DccOptions& opts,
                                  const DccResult* binary_incumbent = nullptr);

}  // namespace pixelwpt
