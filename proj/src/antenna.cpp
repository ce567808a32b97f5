// SPDX-License-Identifier: Apache-2.0
//
// pixelwpt: pixel-antenna MIMO wireless power transfer simulation library

#include "pixelwpt/antenna.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pixelwpt/rng.hpp"

namespace pixelwpt {

namespace {

constexpr double kRcondFloor = 1e-14;          // condition number guard 1e14
constexpr double kDegenerateNorm = 1e-14;
constexpr std::complex<double> kJ{0.0, 1.0};

}  // namespace

void validate(const AntennaCoder& coder) {
  if (coder.b.size() < 1) throw Error("antenna coder must have at least one entry");
  for (Eigen::Index i = 0; i < coder.b.size(); ++i) {
    const double v = coder.b(i);
    if (!std::isfinite(v)) throw Error("antenna coder entry is not finite");
    if (coder.mode == CoderMode::Binary) {
      if (v != 0.0 && v != 1.0)
        throw Error("binary antenna coder entry must be exactly 0 or 1");
    } else if (v < 0.0 || v > 1.0) {
      throw Error("continuous antenna coder entry must lie in [0, 1]");
    }
  }
}

void validate(const AntennaConfig& cfg) {
  if (!(cfg.x_oc > 0.0)) throw Error("antenna config: x_oc must be positive");
  if (!(cfg.power_fraction > 0.9 && cfg.power_fraction < 1.0))
    throw Error("antenna config: power_fraction must lie in (0.9, 1)");
}

void validate(const MultiportNetwork& net, double reciprocity_tol) {
  if (net.q < 1) throw Error("network: pixel-port count must be >= 1");
  if (net.k < 1) throw Error("network: angle sample count must be >= 1");
  const Eigen::Index n = net.q + 1;
  if (net.z.rows() != n || net.z.cols() != n)
    throw Error("network: z must be (Q+1) x (Q+1)");
  if (net.e_oc.rows() != 2 * net.k || net.e_oc.cols() != n)
    throw Error("network: e_oc must be 2K x (Q+1)");
  if (!net.z.allFinite()) throw Error("network: z has non-finite entries");
  if (!net.e_oc.allFinite()) throw Error("network: e_oc has non-finite entries");
  const double scale = std::max(1.0, net.z.cwiseAbs().maxCoeff());
  const double asym = (net.z - net.z.transpose()).cwiseAbs().maxCoeff();
  if (asym > reciprocity_tol * scale)
    throw Error("network: reciprocity violated, z differs from its transpose");
  // Passivity of the symmetrized resistive part.
  Eigen::MatrixXd re = net.z.real();
  re = 0.5 * (re + re.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(re);
  const double lambda_max = std::max(1.0, es.eigenvalues().maxCoeff());
  if (es.eigenvalues().minCoeff() < -1e-9 * lambda_max)
    throw Error("network: passivity violated, Re{z} is not positive semidefinite");
}

Eigen::VectorXcd load_impedance(const AntennaCoder& coder,
                                const AntennaConfig& cfg) {
  validate(coder);
  validate(cfg);
  Eigen::VectorXcd z_l(coder.b.size());
  for (Eigen::Index i = 0; i < coder.b.size(); ++i)
    z_l(i) = kJ * (cfg.x_oc * coder.b(i));
  return z_l;
}

Eigen::VectorXcd port_currents_reactance(const MultiportNetwork& net,
                                         const Eigen::VectorXd& x_load,
                                         std::complex<double> i_a) {
  const int q = net.q;
  if (x_load.size() != q)
    throw DimensionMismatch("port_currents: load vector length differs from Q");
  Eigen::MatrixXcd loaded = net.z.bottomRightCorner(q, q);
  for (int i = 0; i < q; ++i) loaded(i, i) += kJ * x_load(i);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(loaded);
  const double rcond = lu.rcond();
  if (!(rcond >= kRcondFloor))
    throw SingularLoadedNetwork(
        "loaded pixel-port matrix is numerically singular (rcond " +
        std::to_string(rcond) + ")");
  const Eigen::VectorXcd z_pa = net.z.col(0).tail(q);
  return -lu.solve((z_pa * i_a).eval());
}

Eigen::VectorXcd port_currents(const MultiportNetwork& net,
                               const AntennaCoder& coder,
                               const AntennaConfig& cfg) {
  validate(coder);
  if (coder.b.size() != net.q)
    throw DimensionMismatch("port_currents: coder length differs from Q");
  return port_currents_reactance(net, (cfg.x_oc * coder.b).eval(),
                                 cfg.unit_excitation);
}

PatternBasis compute_basis(const MultiportNetwork& net,
                           const AntennaConfig& cfg) {
  validate(cfg);
  if (net.e_oc.size() == 0 || net.e_oc.cwiseAbs().maxCoeff() == 0.0)
    throw ZeroPatternMatrix("compute_basis: e_oc is identically zero");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      net.e_oc, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::Index nz = 0;
  while (nz < sv.size() && sv(nz) > sv(0) * 1e-14) ++nz;
  if (nz == 0) throw ZeroPatternMatrix("compute_basis: no nonzero singular values");
  const double total = sv.head(nz).squaredNorm();
  double cum = 0.0;
  Eigen::Index r = nz;
  for (Eigen::Index i = 0; i < nz; ++i) {
    cum += sv(i) * sv(i);
    if (cum >= cfg.power_fraction * total) {
      r = i + 1;
      break;
    }
  }
  PatternBasis basis;
  basis.u = svd.matrixU().leftCols(r);
  basis.s = sv.head(r);
  basis.v = svd.matrixV().leftCols(r);
  basis.n_eff = static_cast<int>(r);
  return basis;
}

namespace {

Eigen::VectorXcd pattern_coder_from_currents(const PatternBasis& basis,
                                             const Eigen::VectorXcd& i_all,
                                             Side side) {
  Eigen::VectorXcd t;
  if (side == Side::Transmit) {
    t = basis.s.asDiagonal() * (basis.v.adjoint() * i_all);
  } else {
    t = basis.s.asDiagonal() * (basis.v.transpose() * i_all.conjugate());
  }
  const double norm = t.norm();
  if (norm < kDegenerateNorm)
    throw DegenerateRadiator("coder radiates nothing through the basis");
  return t / norm;
}

}  // namespace

Eigen::VectorXcd pattern_coder(const PatternBasis& basis,
                               const MultiportNetwork& net,
                               const AntennaCoder& coder,
                               const AntennaConfig& cfg, Side side) {
  const Eigen::VectorXcd i_p = port_currents(net, coder, cfg);
  Eigen::VectorXcd i_all(net.q + 1);
  i_all(0) = cfg.unit_excitation;
  i_all.tail(net.q) = i_p;
  return pattern_coder_from_currents(basis, i_all, side);
}

Eigen::VectorXcd pattern_coder_reactance(const PatternBasis& basis,
                                         const MultiportNetwork& net,
                                         const Eigen::VectorXd& x_load,
                                         const AntennaConfig& cfg, Side side) {
  const Eigen::VectorXcd i_p =
      port_currents_reactance(net, x_load, cfg.unit_excitation);
  Eigen::VectorXcd i_all(net.q + 1);
  i_all(0) = cfg.unit_excitation;
  i_all.tail(net.q) = i_p;
  return pattern_coder_from_currents(basis, i_all, side);
}

Eigen::VectorXcd radiation_pattern(const PatternBasis& basis,
                                   const Eigen::VectorXcd& w) {
  if (w.size() != basis.n_eff)
    throw DimensionMismatch("radiation_pattern: coder length differs from n_eff");
  return basis.u * w;
}

MultiportNetwork synthesize_antenna(std::uint64_t seed, int q, int k,
                                    int target_rank,
                                    const AntennaConfig& cfg) {
  validate(cfg);
  if (q < 1 || k < 1) throw Error("synthesize_antenna: q and k must be >= 1");
  const int n = q + 1;
  const int m0 = std::min(2 * k, n);
  if (target_rank < 1 || target_rank > m0)
    throw InfeasibleRank("synthesize_antenna: target rank " +
                         std::to_string(target_rank) + " exceeds min(2K, Q+1) = " +
                         std::to_string(m0));

  Philox rng(seed, kStreamAntenna);
  auto real_gaussian = [&rng](int rows, int cols) {
    Eigen::MatrixXd g(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) g(i, j) = rng.gaussian();
    return g;
  };
  auto complex_gaussian = [&rng](int rows, int cols) {
    Eigen::MatrixXcd g(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
    return g;
  };

  // Resistive part R^T R is PSD; symmetrize bitwise and add an ohmic floor
  // so loaded solves stay well conditioned for every coder.
  const Eigen::MatrixXd r = real_gaussian(n, n);
  const Eigen::MatrixXd gram = r.transpose() * r;
  Eigen::MatrixXd z_re = (gram + gram.transpose()) * (25.0 / n);
  z_re.diagonal().array() += 5.0;
  const Eigen::MatrixXd a = real_gaussian(n, n);
  const Eigen::MatrixXd z_im = (a + a.transpose()) * 12.5;

  MultiportNetwork net;
  net.q = q;
  net.k = k;
  net.z = z_re.cast<std::complex<double>>() +
          kJ * z_im.cast<std::complex<double>>();

  // e_oc = Q1 diag(sigma) Q2^H with the head carrying just over
  // power_fraction of the energy, so the basis truncation lands exactly on
  // target_rank.
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr1(complex_gaussian(2 * k, m0));
  const Eigen::MatrixXcd q1 =
      qr1.householderQ() * Eigen::MatrixXcd::Identity(2 * k, m0);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr2(complex_gaussian(n, m0));
  const Eigen::MatrixXcd q2 =
      qr2.householderQ() * Eigen::MatrixXcd::Identity(n, m0);

  Eigen::VectorXd sigma = Eigen::VectorXd::Zero(m0);
  double head_energy = 0.0;
  for (int i = 0; i < target_rank; ++i) {
    sigma(i) = std::pow(0.96, i);
    head_energy += sigma(i) * sigma(i);
  }
  const int tail = m0 - target_rank;
  if (tail > 0) {
    const double pf = cfg.power_fraction;
    const double tail_energy = 0.6 * (1.0 - pf) / pf * head_energy;
    const double td = 0.7;
    const double t0 = std::sqrt(tail_energy * (1.0 - td * td) /
                                (1.0 - std::pow(td, 2.0 * tail)));
    for (int j = 0; j < tail; ++j)
      sigma(target_rank + j) = t0 * std::pow(td, j);
  }
  net.e_oc = q1 * sigma.asDiagonal() * q2.adjoint();
  return net;
}

namespace {

nlohmann::json complex_matrix_to_json(const Eigen::MatrixXcd& m, bool real) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      arr.push_back(real ? m(i, j).real() : m(i, j).imag());
  return arr;
}

void fill_complex_matrix(Eigen::MatrixXcd& m, const nlohmann::json& re,
                         const nlohmann::json& im, const std::string& name) {
  const std::size_t want = static_cast<std::size_t>(m.rows() * m.cols());
  if (re.size() != want || im.size() != want)
    throw Error("antenna file: " + name + " array size mismatch");
  std::size_t idx = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j, ++idx)
      m(i, j) = {re[idx].get<double>(), im[idx].get<double>()};
}

}  // namespace

std::string antenna_to_json_text(const MultiportNetwork& net) {
  nlohmann::json j;
  j["q"] = net.q;
  j["k"] = net.k;
  j["z_real"] = complex_matrix_to_json(net.z, true);
  j["z_imag"] = complex_matrix_to_json(net.z, false);
  j["eoc_real"] = complex_matrix_to_json(net.e_oc, true);
  j["eoc_imag"] = complex_matrix_to_json(net.e_oc, false);
  return j.dump();
}

MultiportNetwork antenna_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("antenna file: invalid JSON: ") + e.what());
  }
  MultiportNetwork net;
  try {
    net.q = j.at("q").get<int>();
    net.k = j.at("k").get<int>();
    if (net.q < 1 || net.k < 1)
      throw Error("antenna file: q and k must be >= 1");
    net.z.resize(net.q + 1, net.q + 1);
    net.e_oc.resize(2 * net.k, net.q + 1);
    fill_complex_matrix(net.z, j.at("z_real"), j.at("z_imag"), "z");
    fill_complex_matrix(net.e_oc, j.at("eoc_real"), j.at("eoc_imag"), "eoc");
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("antenna file: ") + e.what());
  }
  validate(net);
  return net;
}

void save_antenna(const MultiportNetwork& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open antenna file for writing: " + path);
  out << antenna_to_json_text(net) << "\n";
}

MultiportNetwork load_antenna(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open antenna file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return antenna_from_json_text(ss.str());
}

}  // namespace pixelwpt
