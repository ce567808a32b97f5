// SPDX-License-Identifier: Apache-2.0
//
// pixelwpt: pixel-antenna MIMO wireless power transfer simulation library

#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "pixelwpt/errors.hpp"

namespace pixelwpt {

enum class CoderMode { Binary, Continuous };
enum class Side { Transmit, Receive };

/// Per-load control values of one pixel antenna: switch states (binary mode,
/// entries in {0, 1}) or normalized reactances (continuous mode, entries in
/// [0, 1]).
struct AntennaCoder {
  Eigen::VectorXd b;
  CoderMode mode = CoderMode::Binary;
};

/// (Q+1)-port model of one pixel antenna: one antenna port followed by Q
/// pixel ports. `z` is the full impedance matrix in ohms, partitioned as
/// [z_AA z_AP; z_PA Z_PP]. `e_oc` holds the open-circuit radiation patterns
/// of all ports, theta and phi polarizations stacked over K sampled angles
/// (2K rows, Q+1 columns).
struct MultiportNetwork {
  int q = 0;
  int k = 0;
  Eigen::MatrixXcd z;
  Eigen::MatrixXcd e_oc;
};

/// Dominant SVD factors of e_oc. The n_eff columns of `u` are the orthogonal
/// basis patterns the antenna can radiate (the effective aerial degrees of
/// freedom).
struct PatternBasis {
  Eigen::MatrixXcd u;   // 2K x n_eff
  Eigen::VectorXd s;    // n_eff, descending, strictly positive
  Eigen::MatrixXcd v;   // (Q+1) x n_eff
  int n_eff = 0;
};

struct AntennaConfig {
  double x_oc = 1e9;             // open-circuit reactance approximation, ohms
  double power_fraction = 0.998; // basis truncation threshold
  std::complex<double> unit_excitation{1.0, 0.0};  // antenna-port current i_A
};

void validate(const AntennaCoder& coder);
void validate(const AntennaConfig& cfg);
/// Full invariant check for loaded antenna data; throws on the first violated
/// invariant (reciprocity within `reciprocity_tol` relative, passivity of
/// Re{z}, shapes, finiteness).
void validate(const MultiportNetwork& net, double reciprocity_tol = 1e-9);

/// Diagonal of the load impedance matrix Z_L(b): entry q is j*x_oc*b_q.
Eigen::VectorXcd load_impedance(const AntennaCoder& coder,
                                const AntennaConfig& cfg);

/// Pixel-port currents i_P = -(Z_PP + Z_L(b))^-1 z_PA i_A.
/// Throws SingularLoadedNetwork when the loaded matrix has condition number
/// above 1e14 (no silent regularization).
Eigen::VectorXcd port_currents(const MultiportNetwork& net,
                               const AntennaCoder& coder,
                               const AntennaConfig& cfg);

/// Same solve with raw load reactances in ohms (continuous optimization
/// path; signs are free).
Eigen::VectorXcd port_currents_reactance(const MultiportNetwork& net,
                                         const Eigen::VectorXd& x_load,
                                         std::complex<double> i_a);

/// Truncated SVD of e_oc: n_eff is the smallest rank whose singular values
/// carry at least `power_fraction` of the total energy.
PatternBasis compute_basis(const MultiportNetwork& net,
                           const AntennaConfig& cfg);

/// Unit-norm pattern coder of a coded antenna. Transmit side uses S V^H i;
/// receive side uses S V^T conj(i) (the conjugation is deliberate and locked
/// by tests).
Eigen::VectorXcd pattern_coder(const PatternBasis& basis,
                               const MultiportNetwork& net,
                               const AntennaCoder& coder,
                               const AntennaConfig& cfg, Side side);

/// Pattern coder evaluated from raw load reactances in ohms.
Eigen::VectorXcd pattern_coder_reactance(const PatternBasis& basis,
                                         const MultiportNetwork& net,
                                         const Eigen::VectorXd& x_load,
                                         const AntennaConfig& cfg, Side side);

/// Radiation pattern synthesized from a pattern coder: U w.
Eigen::VectorXcd radiation_pattern(const PatternBasis& basis,
                                   const Eigen::VectorXcd& w);

/// Deterministic synthetic antenna generator. Produces a reciprocal network
/// with passive Re{z} and an e_oc whose leading `target_rank` singular values
/// carry at least cfg.power_fraction of the energy, so compute_basis returns
/// exactly `target_rank`.
MultiportNetwork synthesize_antenna(std::uint64_t seed, int q, int k,
                                    int target_rank, const AntennaConfig& cfg);

std::string antenna_to_json_text(const MultiportNetwork& net);
MultiportNetwork antenna_from_json_text(const std::string& text);
void save_antenna(const MultiportNetwork& net, const std::string& path);
MultiportNetwork load_antenna(const std::string& path);

}  // namespace pixelwpt
