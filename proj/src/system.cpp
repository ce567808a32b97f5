// SPDX-License-Identifier: Apache-2.0
//
// pixelwpt: pixel-antenna MIMO wireless power transfer simulation library

#include "pixelwpt/system.hpp"

namespace pixelwpt {

PipelineContext make_context(MultiportNetwork antenna, AntennaConfig acfg,
                             RectennaParams rect) {
  validate(acfg);
  validate(rect);
  PipelineContext ctx;
  ctx.basis = compute_basis(antenna, acfg);
  ctx.antenna = std::move(antenna);
  ctx.antenna_cfg = acfg;
  ctx.rectenna = rect;
  return ctx;
}

CoderCache::CoderCache(const PipelineContext& ctx, Side side)
    : ctx_(&ctx), side_(side) {
  if (ctx.antenna.q > 63)
    throw Error("coder cache supports at most 63 pixel ports");
}

const Eigen::VectorXcd& CoderCache::lookup(std::uint64_t bits) {
  auto it = map_.find(bits);
  if (it != map_.end()) return it->second;
  const int q = ctx_->antenna.q;
  AntennaCoder coder;
  coder.mode = CoderMode::Binary;
  coder.b.resize(q);
  for (int i = 0; i < q; ++i) coder.b(i) = static_cast<double>((bits >> i) & 1u);
  Eigen::VectorXcd w =
      pattern_coder(ctx_->basis, ctx_->antenna, coder, ctx_->antenna_cfg, side_);
  return map_.emplace(bits, std::move(w)).first->second;
}

std::vector<std::uint8_t> pack_coders(const CoderMatrix& b_t,
                                      const CoderMatrix& b_r) {
  validate(b_t);
  validate(b_r);
  const Eigen::Index q = b_t.columns.front().b.size();
  if (b_r.columns.front().b.size() != q)
    throw DimensionMismatch("pack_coders: transmit and receive Q differ");
  std::vector<std::uint8_t> bits;
  bits.reserve((b_t.columns.size() + b_r.columns.size()) * q);
  auto append = [&](const CoderMatrix& cm) {
    for (const AntennaCoder& c : cm.columns) {
      if (c.mode != CoderMode::Binary)
        throw Error("pack_coders: coders must be binary");
      for (Eigen::Index i = 0; i < q; ++i)
        bits.push_back(c.b(i) != 0.0 ? 1u : 0u);
    }
  };
  append(b_t);
  append(b_r);
  return bits;
}

std::pair<CoderMatrix, CoderMatrix> unpack_coders(
    const std::vector<std::uint8_t>& bits, int q, int m, int n) {
  if (static_cast<int>(bits.size()) != (m + n) * q)
    throw DimensionMismatch("unpack_coders: bit count differs from (M+N)Q");
  auto take = [&](int antenna) {
    AntennaCoder c;
    c.mode = CoderMode::Binary;
    c.b.resize(q);
    for (int i = 0; i < q; ++i)
      c.b(i) = static_cast<double>(bits[antenna * q + i]);
    return c;
  };
  CoderMatrix b_t;
  CoderMatrix b_r;
  for (int a = 0; a < m; ++a) b_t.columns.push_back(take(a));
  for (int a = 0; a < n; ++a) b_r.columns.push_back(take(m + a));
  return {std::move(b_t), std::move(b_r)};
}

Eigen::VectorXd stack_reactances(const Eigen::MatrixXd& x_t,
                                 const Eigen::MatrixXd& x_r) {
  if (x_t.rows() != x_r.rows())
    throw DimensionMismatch("stack_reactances: Q differs between sides");
  const Eigen::Index q = x_t.rows();
  Eigen::VectorXd x(q * (x_t.cols() + x_r.cols()));
  Eigen::Index at = 0;
  for (Eigen::Index j = 0; j < x_t.cols(); ++j, at += q) x.segment(at, q) = x_t.col(j);
  for (Eigen::Index j = 0; j < x_r.cols(); ++j, at += q) x.segment(at, q) = x_r.col(j);
  return x;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> unstack_reactances(
    const Eigen::VectorXd& x, int q, int m, int n) {
  if (x.size() != static_cast<Eigen::Index>(q) * (m + n))
    throw DimensionMismatch("unstack_reactances: length differs from (M+N)Q");
  Eigen::MatrixXd x_t(q, m);
  Eigen::MatrixXd x_r(q, n);
  for (int j = 0; j < m; ++j) x_t.col(j) = x.segment(j * q, q);
  for (int j = 0; j < n; ++j) x_r.col(j) = x.segment((m + j) * q, q);
  return {std::move(x_t), std::move(x_r)};
}

SystemEvaluator::SystemEvaluator(const PipelineContext& ctx,
                                 const BeamspaceChannel& ch, int m, int n)
    : ctx_(&ctx),
      m_(m),
      n_(n),
      ne_(ctx.basis.n_eff),
      tx_cache_(ctx, Side::Transmit),
      rx_cache_(ctx, Side::Receive) {
  if (m < 1 || n < 1) throw Error("evaluator: antenna counts must be >= 1");
  if (ch.h_c.rows() != static_cast<Eigen::Index>(n) * ne_ ||
      ch.h_c.cols() != static_cast<Eigen::Index>(m) * ne_)
    throw DimensionMismatch("evaluator: channel dims not divisible into blocks");
  blocks_.reserve(static_cast<std::size_t>(n) * m);
  for (int bn = 0; bn < n; ++bn)
    for (int bm = 0; bm < m; ++bm)
      blocks_.push_back(ch.h_c.block(bn * ne_, bm * ne_, ne_, ne_));
  wt_.resize(m);
  wr_.resize(n);
  wt_val_.resize(m);
  wr_val_.resize(n);
  tmp_.resize(ne_);
  h_.resize(n, m);
}

const Eigen::MatrixXcd& SystemEvaluator::effective_from_bits(
    const std::vector<std::uint8_t>& bits) {
  const int q = ctx_->antenna.q;
  if (static_cast<int>(bits.size()) != (m_ + n_) * q)
    throw DimensionMismatch("evaluator: bit count differs from (M+N)Q");
  auto key_of = [&](int antenna) {
    std::uint64_t key = 0;
    const int base = antenna * q;
    for (int i = 0; i < q; ++i)
      key |= static_cast<std::uint64_t>(bits[base + i] & 1u) << i;
    return key;
  };
  for (int a = 0; a < m_; ++a) wt_[a] = &tx_cache_.lookup(key_of(a));
  for (int a = 0; a < n_; ++a) wr_[a] = &rx_cache_.lookup(key_of(m_ + a));
  for (int bn = 0; bn < n_; ++bn) {
    for (int bm = 0; bm < m_; ++bm) {
      tmp_.noalias() = blocks_[bn * m_ + bm] * (*wt_[bm]);
      h_(bn, bm) = wr_[bn]->dot(tmp_);
    }
  }
  return h_;
}

const Eigen::MatrixXcd& SystemEvaluator::effective_from_reactances(
    const Eigen::VectorXd& x) {
  const int q = ctx_->antenna.q;
  if (x.size() != static_cast<Eigen::Index>(q) * (m_ + n_))
    throw DimensionMismatch("evaluator: reactance length differs from (M+N)Q");
  for (int a = 0; a < m_; ++a) {
    wt_val_[a] = pattern_coder_reactance(ctx_->basis, ctx_->antenna,
                                         x.segment(a * q, q), ctx_->antenna_cfg,
                                         Side::Transmit);
    wt_[a] = &wt_val_[a];
  }
  for (int a = 0; a < n_; ++a) {
    wr_val_[a] = pattern_coder_reactance(ctx_->basis, ctx_->antenna,
                                         x.segment((m_ + a) * q, q),
                                         ctx_->antenna_cfg, Side::Receive);
    wr_[a] = &wr_val_[a];
  }
  for (int bn = 0; bn < n_; ++bn) {
    for (int bm = 0; bm < m_; ++bm) {
      tmp_.noalias() = blocks_[bn * m_ + bm] * (*wt_[bm]);
      h_(bn, bm) = wr_[bn]->dot(tmp_);
    }
  }
  return h_;
}

}  // namespace pixelwpt
