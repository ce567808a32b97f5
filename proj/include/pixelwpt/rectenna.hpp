// SPDX-License-Identifier: Apache-2.0
//
// pixelwpt: pixel-antenna MIMO wireless power transfer simulation library

#pragma once

#include <complex>

#include <Eigen/Dense>

#include "pixelwpt/errors.hpp"

namespace pixelwpt {

/// Truncated nonlinear rectifier model constants. Amplitudes are voltage
/// phasors (volts), powers come out in watts.
struct RectennaParams {
  double r_ant = 50.0;   // antenna impedance, ohms
  double r_l = 5000.0;   // rectifier load, ohms
  double i_d = 1.05;     // diode ideality factor
  double v_t = 0.025;    // thermal voltage, volts
  int n_0 = 4;           // truncation order, even
};

void validate(const RectennaParams& p);

/// zeta_i = (1/2pi) integral of sin^i over a period; (i-1)!!/i!! for even i.
double harmonic_coefficient(int i);

/// beta_i = r_ant^(i/2) / (i! (i_d v_t)^(i-1)).
double rectifier_coefficient(const RectennaParams& p, int i);

/// zeta_i |amplitude|^i, the time average of the i-th power of a single-tone
/// signal with the given phasor amplitude.
double harmonic_moment(std::complex<double> amplitude, int i);

/// DC voltage of one rectifier branch: sum over even i <= n_0 of
/// beta_i zeta_i |amplitude|^i.
double dc_voltage_branch(std::complex<double> amplitude,
                         const RectennaParams& p);

/// DC-combining output power: sum over branches of v_n^2 / R_L with
/// v_n = dc_voltage_branch([h p_t]_n).
double power_dcc(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& p_t,
                 const RectennaParams& p);

/// RF-combining output power: v^2 / R_L with the single-rectifier amplitude
/// p_r^H h p_t.
double power_rfc(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& p_t,
                 const Eigen::VectorXcd& p_r, const RectennaParams& p);

}  // namespace pixelwpt
