// SPDX-License-Identifier: Apache-2.0
//
// pixelwpt: pixel-antenna MIMO wireless power transfer simulation library

#include "pixelwpt/rectenna.hpp"

#include <cmath>

namespace pixelwpt {

void validate(const RectennaParams& p) {
  if (!(p.r_ant > 0.0)) throw Error("rectenna: r_ant must be positive");
  if (!(p.r_l > 0.0)) throw Error("rectenna: r_l must be positive");
  if (!(p.i_d > 0.0)) throw Error("rectenna: i_d must be positive");
  if (!(p.v_t > 0.0)) throw Error("rectenna: v_t must be positive");
  if (p.n_0 < 2 || p.n_0 % 2 != 0)
    throw Error("rectenna: n_0 must be an even integer >= 2");
}

double harmonic_coefficient(int i) {
  if (i < 2 || i % 2 != 0)
    throw OddOrder("harmonic coefficient defined for even i >= 2");
  double z = 1.0;
  for (int t = 1; t < i; t += 2) z *= static_cast<double>(t) / (t + 1);
  return z;
}

double rectifier_coefficient(const RectennaParams& p, int i) {
  if (i < 2 || i % 2 != 0)
    throw OddOrder("rectifier coefficient defined for even i >= 2");
  double fact = 1.0;
  for (int t = 2; t <= i; ++t) fact *= t;
  return std::pow(p.r_ant, i / 2.0) / (fact * std::pow(p.i_d * p.v_t, i - 1));
}

double harmonic_moment(std::complex<double> amplitude, int i) {
  return harmonic_coefficient(i) * std::pow(std::abs(amplitude), i);
}

double dc_voltage_branch(std::complex<double> amplitude,
                         const RectennaParams& p) {
  const double a2 = std::norm(amplitude);
  double v = 0.0;
  double a_pow = a2;  // |A|^i for i = 2, 4, ...
  for (int i = 2; i <= p.n_0; i += 2) {
    v += rectifier_coefficient(p, i) * harmonic_coefficient(i) * a_pow;
    a_pow *= a2;
  }
  return v;
}

double power_dcc(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& p_t,
                 const RectennaParams& p) {
  if (h.cols() != p_t.size())
    throw DimensionMismatch("power_dcc: beamformer length differs from M");
  const Eigen::VectorXcd y = h * p_t;
  double out = 0.0;
  for (Eigen::Index n = 0; n < y.size(); ++n) {
    const double v = dc_voltage_branch(y(n), p);
    out += v * v;
  }
  return out / p.r_l;
}

double power_rfc(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& p_t,
                 const Eigen::VectorXcd& p_r, const RectennaParams& p) {
  if (h.cols() != p_t.size() || h.rows() != p_r.size())
    throw DimensionMismatch("power_rfc: beamformer lengths differ from H");
  const std::complex<double> amp = p_r.dot(h * p_t);
  const double v = dc_voltage_branch(amp, p);
  return v * v / p.r_l;
}

}  // namespace pixelwpt
