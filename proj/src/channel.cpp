// SPDX-License-Identifier: Apache-2.0
//
// pixelwpt: pixel-antenna MIMO wireless power transfer simulation library

#include "pixelwpt/channel.hpp"

#include <json.hpp>

#include "pixelwpt/rng.hpp"

namespace pixelwpt {

void validate(const CoderMatrix& coders) {
  if (coders.columns.empty()) throw Error("coder matrix has no columns");
  const Eigen::Index q = coders.columns.front().b.size();
  const CoderMode mode = coders.columns.front().mode;
  for (const AntennaCoder& c : coders.columns) {
    if (c.b.size() != q)
      throw DimensionMismatch("coder matrix columns differ in length");
    if (c.mode != mode) throw Error("coder matrix columns differ in mode");
    validate(c);
  }
}

BeamspaceChannel sample_channel(std::uint64_t rng_seed, int n_r, int n_t,
                                double amplitude_scale) {
  if (n_r < 1 || n_t < 1)
    throw Error("sample_channel: dimensions must be >= 1");
  if (!(amplitude_scale > 0.0))
    throw Error("sample_channel: amplitude_scale must be positive");
  Philox rng(rng_seed, kStreamChannel);
  BeamspaceChannel ch;
  ch.amplitude_scale = amplitude_scale;
  ch.h_c.resize(n_r, n_t);
  for (int i = 0; i < n_r; ++i)
    for (int j = 0; j < n_t; ++j)
      ch.h_c(i, j) = amplitude_scale * rng.complex_normal();
  return ch;
}

Eigen::MatrixXcd assemble_pattern_coders(const CoderMatrix& coders,
                                         const MultiportNetwork& net,
                                         const PatternBasis& basis,
                                         const AntennaConfig& cfg, Side side) {
  validate(coders);
  const int count = static_cast<int>(coders.columns.size());
  const int ne = basis.n_eff;
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(count * ne, count);
  for (int a = 0; a < count; ++a) {
    try {
      w.block(a * ne, a, ne, 1) =
          pattern_coder(basis, net, coders.columns[a], cfg, side);
    } catch (const DegenerateRadiator& e) {
      throw DegenerateRadiator(
          std::string(e.what()) + " (antenna " + std::to_string(a) + ")", a);
    }
  }
  return w;
}

Eigen::MatrixXcd effective_channel(const BeamspaceChannel& ch,
                                   const Eigen::MatrixXcd& w_t,
                                   const Eigen::MatrixXcd& w_r) {
  if (w_r.rows() != ch.h_c.rows() || w_t.rows() != ch.h_c.cols())
    throw DimensionMismatch("effective_channel: non-conformable dimensions");
  return w_r.adjoint() * ch.h_c * w_t;
}

BeamspaceChannel virtual_to_beamspace(const VirtualChannel& hv,
                                      const std::vector<PatternBasis>& tx,
                                      const std::vector<PatternBasis>& rx) {
  if (hv.h_v.rows() != hv.h_v.cols())
    throw DimensionMismatch("virtual_to_beamspace: H_V must be square");
  const Eigen::Index two_k = hv.h_v.rows();
  if (tx.empty() || rx.empty())
    throw Error("virtual_to_beamspace: empty basis list");
  Eigen::Index nt = 0;
  Eigen::Index nr = 0;
  for (const PatternBasis& b : tx) {
    if (b.u.rows() != two_k)
      throw DimensionMismatch("virtual_to_beamspace: basis rows differ from 2K");
    nt += b.n_eff;
  }
  for (const PatternBasis& b : rx) {
    if (b.u.rows() != two_k)
      throw DimensionMismatch("virtual_to_beamspace: basis rows differ from 2K");
    nr += b.n_eff;
  }
  Eigen::MatrixXcd e_t(two_k, nt);
  Eigen::MatrixXcd e_r(two_k, nr);
  Eigen::Index col = 0;
  for (const PatternBasis& b : tx) {
    e_t.middleCols(col, b.n_eff) = b.u;
    col += b.n_eff;
  }
  col = 0;
  for (const PatternBasis& b : rx) {
    e_r.middleCols(col, b.n_eff) = b.u;
    col += b.n_eff;
  }
  BeamspaceChannel out;
  out.amplitude_scale = 1.0;
  out.h_c = e_r.transpose() * hv.h_v * e_t;
  return out;
}

std::string channel_to_json_text(const BeamspaceChannel& ch) {
  nlohmann::json j;
  j["n_r"] = ch.h_c.rows();
  j["n_t"] = ch.h_c.cols();
  j["scale"] = ch.amplitude_scale;
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < ch.h_c.rows(); ++i) {
    for (Eigen::Index jj = 0; jj < ch.h_c.cols(); ++jj) {
      re.push_back(ch.h_c(i, jj).real());
      im.push_back(ch.h_c(i, jj).imag());
    }
  }
  j["h_real"] = std::move(re);
  j["h_imag"] = std::move(im);
  return j.dump();
}

BeamspaceChannel channel_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    BeamspaceChannel ch;
    const int n_r = j.at("n_r").get<int>();
    const int n_t = j.at("n_t").get<int>();
    ch.amplitude_scale = j.at("scale").get<double>();
    const auto& re = j.at("h_real");
    const auto& im = j.at("h_imag");
    if (static_cast<Eigen::Index>(re.size()) != n_r * n_t ||
        static_cast<Eigen::Index>(im.size()) != n_r * n_t)
      throw Error("channel file: array size mismatch");
    ch.h_c.resize(n_r, n_t);
    std::size_t idx = 0;
    for (int i = 0; i < n_r; ++i)
      for (int jj = 0; jj < n_t; ++jj, ++idx)
        ch.h_c(i, jj) = {re[idx].get<double>(), im[idx].get<double>()};
    if (!ch.h_c.allFinite()) throw Error("channel file: non-finite entries");
    return ch;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("channel file: ") + e.what());
  }
}

}  // namespace pixelwpt
