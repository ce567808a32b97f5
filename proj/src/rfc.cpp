// SPDX-License-Identifier: Apache-2.0
//
// pixelwpt: pixel-antenna MIMO wireless power transfer simulation library

#include "pixelwpt/rfc.hpp"

#include <algorithm>
#include <cmath>

#include "pixelwpt/rng.hpp"

namespace pixelwpt {

namespace {

constexpr std::complex<double> kJ{0.0, 1.0};

std::vector<std::uint8_t> initial_bits(const PipelineContext& ctx, int m,
                                       int n, const CoderMatrix* init_bt,
                                       const CoderMatrix* init_br) {
  if (init_bt != nullptr && init_br != nullptr)
    return pack_coders(*init_bt, *init_br);
  if (init_bt != nullptr || init_br != nullptr)
    throw Error("coder init must supply both sides or neither");
  return std::vector<std::uint8_t>(
      static_cast<std::size_t>(m + n) * ctx.antenna.q, 0u);
}

CoderMatrix clamp_to_coders(const Eigen::MatrixXd& xm, double x_oc) {
  CoderMatrix cm;
  for (Eigen::Index j = 0; j < xm.cols(); ++j) {
    AntennaCoder c;
    c.mode = CoderMode::Continuous;
    c.b = (xm.col(j).cwiseAbs() / x_oc).cwiseMin(1.0).cwiseMax(0.0);
    cm.columns.push_back(std::move(c));
  }
  return cm;
}

}  // namespace

double sigma_max(const Eigen::MatrixXcd& h) {
  const Eigen::Index r = h.rows();
  const Eigen::Index c = h.cols();
  if (r == 0 || c == 0) throw DimensionMismatch("sigma_max: empty matrix");
  if (r == 1 || c == 1) return h.norm();
  if (std::min(r, c) == 2) {
    const Eigen::MatrixXcd g =
        (r <= c) ? Eigen::MatrixXcd(h * h.adjoint())
                 : Eigen::MatrixXcd(h.adjoint() * h);
    const double a = g(0, 0).real();
    const double b = g(1, 1).real();
    const double off = std::abs(g(0, 1));
    const double mid = 0.5 * (a - b);
    const double lam = 0.5 * (a + b) + std::sqrt(mid * mid + off * off);
    return std::sqrt(std::max(lam, 0.0));
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h);
  return svd.singularValues()(0);
}

RfcBeamformers svd_beamformers(const Eigen::MatrixXcd& h,
                               double power_budget) {
  if (h.size() == 0) throw DimensionMismatch("svd_beamformers: empty channel");
  if (!(h.cwiseAbs().maxCoeff() > 0.0))
    throw ZeroChannel("svd_beamformers: channel is identically zero");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      h, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXcd u1 = svd.matrixU().col(0);
  Eigen::VectorXcd v1 = svd.matrixV().col(0);
  // Rotate the pair so the largest-magnitude entry of v1 is real positive;
  // the product u1 sigma v1^H is unchanged.
  Eigen::Index imax = 0;
  v1.cwiseAbs().maxCoeff(&imax);
  const std::complex<double> ph = v1(imax) / std::abs(v1(imax));
  v1 /= ph;
  u1 /= ph;
  RfcBeamformers bf;
  const double s0 = svd.singularValues()(0);
  bf.p_t = std::sqrt(2.0 * power_budget) * v1;
  bf.p_r = u1;
  bf.gain = 2.0 * power_budget * s0 * s0;
  return bf;
}

AbfResult abf_receive_beamforming(
    const Eigen::MatrixXcd& h, double power_budget, double tol, int max_iter,
    const Eigen::VectorXcd* init,
    const std::function<void(double)>& on_iterate) {
  if (h.size() == 0) throw DimensionMismatch("abf: empty channel");
  if (!(h.cwiseAbs().maxCoeff() > 0.0))
    throw ZeroChannel("abf: channel is identically zero");
  const Eigen::Index n = h.rows();
  const double mag = 1.0 / std::sqrt(static_cast<double>(n));

  Eigen::VectorXcd p_r;
  if (init != nullptr) {
    if (init->size() != n)
      throw DimensionMismatch("abf: init length differs from N");
    p_r = *init;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = std::abs(p_r(i));
      p_r(i) = (a > 0.0) ? p_r(i) * (mag / a) : std::complex<double>(mag, 0.0);
    }
  } else {
    p_r = Eigen::VectorXcd::Constant(n, std::complex<double>(mag, 0.0));
  }

  const Eigen::MatrixXcd g = h * h.adjoint();
  double r0sq = std::real(p_r.dot(g * p_r));
  AbfResult res;
  for (int k = 1; k <= max_iter; ++k) {
    const Eigen::VectorXcd z = g * p_r;
    Eigen::VectorXcd p_new(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(z(i)) > 0.0) {
        p_new(i) = std::polar(mag, std::arg(z(i)));
      } else {
        // Zero argument leaves the phase undefined; keep the previous one.
        p_new(i) = p_r(i);
      }
    }
    const double change = (p_new - p_r).norm() / p_new.norm();
    const double r0sq_new = std::real(p_new.dot(g * p_new));
    const double guard = 1e-12 * std::max({r0sq, r0sq_new, 1e-300});
    if (r0sq_new < r0sq - guard)
      throw Error("abf: surrogate step decreased the objective");
    // The update maximizes the linear minorant, so it cannot decrease the
    // objective beyond roundoff; accept it and keep polishing the phases.
    // The objective is quadratically flat at the fixed point, so its change
    // criterion uses tol^2, and an exact stall (improvement below double
    // resolution) defers to the beamformer-change criterion.
    p_r = p_new;
    const bool obj_converged =
        r0sq_new > r0sq &&
        r0sq_new - r0sq <= tol * tol * std::max(r0sq, 1e-300);
    r0sq = r0sq_new;
    res.iterations = k;
    if (on_iterate) on_iterate(r0sq);
    if (change < tol || obj_converged) break;
  }

  res.beamformers.p_r = p_r;
  const Eigen::VectorXcd hp = h.adjoint() * p_r;  // (p_r^H H)^H
  const double hp_norm = hp.norm();
  if (hp_norm > 1e-150) {
    res.beamformers.p_t = std::sqrt(2.0 * power_budget) * (hp / hp_norm);
  } else {
    res.beamformers.p_t =
        std::sqrt(2.0 * power_budget) * Eigen::VectorXcd::Unit(h.cols(), 0);
  }
  res.beamformers.gain = 2.0 * power_budget * r0sq;
  return res;
}

RfcResult optimize_rfc_binary(const PipelineContext& ctx,
                              const BeamspaceChannel& ch, double power_budget,
                              const RfcOptions& opts,
                              const CoderMatrix* init_bt,
                              const CoderMatrix* init_br) {
  const int ne = ctx.basis.n_eff;
  const int m = static_cast<int>(ch.h_c.cols()) / ne;
  const int n = static_cast<int>(ch.h_c.rows()) / ne;
  SystemEvaluator ev(ctx, ch, m, n);
  const std::vector<std::uint8_t> init = initial_bits(ctx, m, n, init_bt, init_br);
  const SeboResult sr = sebo_maximize(
      [&](const std::vector<std::uint8_t>& b) {
        const double s = sigma_max(ev.effective_from_bits(b));
        return 2.0 * power_budget * s * s;
      },
      ev.total_bits(), init, opts.sebo);
  RfcResult res;
  auto [bt, br] = unpack_coders(sr.bits, ctx.antenna.q, m, n);
  res.b_t = std::move(bt);
  res.b_r = std::move(br);
  const Eigen::MatrixXcd h = ev.effective_from_bits(sr.bits);
  res.beamformers = svd_beamformers(h, power_budget);
  res.power = power_rfc(h, res.beamformers.p_t, res.beamformers.p_r,
                        ctx.rectenna);
  res.outer_iterations = 1;
  return res;
}

RfcResult optimize_rfc_continuous(const PipelineContext& ctx,
                                  const BeamspaceChannel& ch,
                                  double power_budget, const RfcOptions& opts,
                                  const RfcResult* binary_incumbent) {
  const int ne = ctx.basis.n_eff;
  const int m = static_cast<int>(ch.h_c.cols()) / ne;
  const int n = static_cast<int>(ch.h_c.rows()) / ne;
  const int q = ctx.antenna.q;
  const int dim = (m + n) * q;

  RfcResult binary;
  if (binary_incumbent == nullptr) {
    binary = optimize_rfc_binary(ctx, ch, power_budget, opts);
    binary_incumbent = &binary;
  }
  SystemEvaluator ev(ctx, ch, m, n);
  Eigen::VectorXd x_bin(dim);
  {
    const std::vector<std::uint8_t> bits =
        pack_coders(binary_incumbent->b_t, binary_incumbent->b_r);
    for (int i = 0; i < dim; ++i)
      x_bin(i) = ctx.antenna_cfg.x_oc * static_cast<double>(bits[i]);
  }
  const double ref = binary_incumbent->beamformers.gain > 0.0
                         ? binary_incumbent->beamformers.gain
                         : 1.0;
  const QuasiNewtonResult qr = quasi_newton_maximize(
      [&](const Eigen::VectorXd& xc) {
        const double s = sigma_max(ev.effective_from_reactances(xc));
        return 2.0 * power_budget * s * s / ref;
      },
      dim, opts.qn, {x_bin});

  RfcResult res;
  auto [x_t, x_r] = unstack_reactances(qr.x, q, m, n);
  res.x_t = std::move(x_t);
  res.x_r = std::move(x_r);
  res.b_t = clamp_to_coders(res.x_t, ctx.antenna_cfg.x_oc);
  res.b_r = clamp_to_coders(res.x_r, ctx.antenna_cfg.x_oc);
  const Eigen::MatrixXcd h = ev.effective_from_reactances(qr.x);
  res.beamformers = svd_beamformers(h, power_budget);
  res.power = power_rfc(h, res.beamformers.p_t, res.beamformers.p_r,
                        ctx.rectenna);
  res.outer_iterations = 1;
  return res;
}

RfcResult optimize_abf_binary(const PipelineContext& ctx,
                              const BeamspaceChannel& ch, double power_budget,
                              const RfcOptions& opts,
                              const CoderMatrix* init_bt,
                              const CoderMatrix* init_br) {
  const int ne = ctx.basis.n_eff;
  const int m = static_cast<int>(ch.h_c.cols()) / ne;
  const int n = static_cast<int>(ch.h_c.rows()) / ne;
  SystemEvaluator ev(ctx, ch, m, n);
  std::vector<std::uint8_t> bits = initial_bits(ctx, m, n, init_bt, init_br);

  Eigen::MatrixXcd h = ev.effective_from_bits(bits);
  AbfResult abf = abf_receive_beamforming(h, power_budget, opts.abf_tol,
                                          opts.abf_max_iter);
  Eigen::VectorXcd p_r = abf.beamformers.p_r;
  double obj = abf.beamformers.gain;

  RfcResult res;
  for (int outer = 1; outer <= opts.outer_max_iter; ++outer) {
    const double prev = obj;
    SeboConfig sebo = opts.sebo;
    sebo.rng_seed = derive_seed(opts.sebo.rng_seed, outer);
    const SeboResult sr = sebo_maximize(
        [&](const std::vector<std::uint8_t>& b) {
          // MRT transmit beamformer against the fixed p_r makes the
          // objective 2P ||p_r^H H||^2.
          return 2.0 * power_budget *
                 (ev.effective_from_bits(b).adjoint() * p_r).squaredNorm();
        },
        ev.total_bits(), bits, sebo);
    if (sr.value < obj - 1e-9 * std::max(obj, 1e-300))
      throw Error("abf alternation: coding step decreased the objective");
    if (sr.value >= obj) {
      bits = sr.bits;
      obj = sr.value;
    }
    h = ev.effective_from_bits(bits);
    abf = abf_receive_beamforming(h, power_budget, opts.abf_tol,
                                  opts.abf_max_iter, &p_r);
    if (abf.beamformers.gain < obj - 1e-9 * std::max(obj, 1e-300))
      throw Error("abf alternation: beamforming step decreased the objective");
    if (abf.beamformers.gain >= obj) {
      p_r = abf.beamformers.p_r;
      obj = abf.beamformers.gain;
    }
    res.outer_iterations = outer;
    if (obj - prev <= opts.outer_tol * std::max(prev, 1e-300)) break;
  }

  auto [bt, br] = unpack_coders(bits, ctx.antenna.q, m, n);
  res.b_t = std::move(bt);
  res.b_r = std::move(br);
  // Final beamformers consistent with the incumbent coders: the kept p_r and
  // the MRT transmit beamformer against it on the final channel.
  h = ev.effective_from_bits(bits);
  res.beamformers.p_r = p_r;
  const Eigen::VectorXcd hp = h.adjoint() * p_r;
  const double hp_norm = hp.norm();
  res.beamformers.p_t =
      hp_norm > 1e-150
          ? Eigen::VectorXcd(std::sqrt(2.0 * power_budget) * (hp / hp_norm))
          : Eigen::VectorXcd(std::sqrt(2.0 * power_budget) *
                             Eigen::VectorXcd::Unit(h.cols(), 0));
  res.beamformers.gain = 2.0 * power_budget * hp.squaredNorm();
  res.power =
      power_rfc(h, res.beamformers.p_t, res.beamformers.p_r, ctx.rectenna);
  return res;
}

RfcResult optimize_abf_continuous(const PipelineContext& ctx,
                                  const BeamspaceChannel& ch,
                                  double power_budget, const RfcOptions& opts,
                                  const RfcResult* binary_incumbent) {
  const int ne = ctx.basis.n_eff;
  const int m = static_cast<int>(ch.h_c.cols()) / ne;
  const int n = static_cast<int>(ch.h_c.rows()) / ne;
  const int q = ctx.antenna.q;
  const int dim = (m + n) * q;

  RfcResult binary;
  if (binary_incumbent == nullptr) {
    binary = optimize_abf_binary(ctx, ch, power_budget, opts);
    binary_incumbent = &binary;
  }
  SystemEvaluator ev(ctx, ch, m, n);
  Eigen::VectorXd x(dim);
  {
    const std::vector<std::uint8_t> bits =
        pack_coders(binary_incumbent->b_t, binary_incumbent->b_r);
    for (int i = 0; i < dim; ++i)
      x(i) = ctx.antenna_cfg.x_oc * static_cast<double>(bits[i]);
  }
  Eigen::VectorXcd p_r = binary_incumbent->beamformers.p_r;
  double obj = 2.0 * power_budget *
               (ev.effective_from_reactances(x).adjoint() * p_r).squaredNorm();

  RfcResult res;
  Eigen::MatrixXcd h;
  AbfResult abf;
  for (int outer = 1; outer <= opts.outer_max_iter; ++outer) {
    const double prev = obj;
    QuasiNewtonConfig qn = opts.qn;
    qn.rng_seed = derive_seed(opts.qn.rng_seed, outer);
    if (outer > 1) qn.restarts = 1;
    const double ref = obj > 0.0 ? obj : 1.0;
    const QuasiNewtonResult qr = quasi_newton_maximize(
        [&](const Eigen::VectorXd& xc) {
          return 2.0 * power_budget *
                 (ev.effective_from_reactances(xc).adjoint() * p_r)
                     .squaredNorm() /
                 ref;
        },
        dim, qn, {x});
    const double cand = qr.value * ref;
    if (cand < obj - 1e-9 * std::max(obj, 1e-300))
      throw Error("abf alternation: coding step decreased the objective");
    if (cand >= obj) {
      x = qr.x;
      obj = cand;
    }
    h = ev.effective_from_reactances(x);
    abf = abf_receive_beamforming(h, power_budget, opts.abf_tol,
                                  opts.abf_max_iter, &p_r);
    if (abf.beamformers.gain < obj - 1e-9 * std::max(obj, 1e-300))
      throw Error("abf alternation: beamforming step decreased the objective");
    if (abf.beamformers.gain >= obj) {
      p_r = abf.beamformers.p_r;
      obj = abf.beamformers.gain;
    }
    res.outer_iterations = outer;
    if (obj - prev <= opts.outer_tol * std::max(prev, 1e-300)) break;
  }

  auto [x_t, x_r] = unstack_reactances(x, q, m, n);
  res.x_t = std::move(x_t);
  res.x_r = std::move(x_r);
  res.b_t = clamp_to_coders(res.x_t, ctx.antenna_cfg.x_oc);
  res.b_r = clamp_to_coders(res.x_r, ctx.antenna_cfg.x_oc);
  h = ev.effective_from_reactances(x);
  res.beamformers.p_r = p_r;
  const Eigen::VectorXcd hp = h.adjoint() * p_r;
  const double hp_norm = hp.norm();
  res.beamformers.p_t =
      hp_norm > 1e-150
          ? Eigen::VectorXcd(std::sqrt(2.0 * power_budget) * (hp / hp_norm))
          : Eigen::VectorXcd(std::sqrt(2.0 * power_budget) *
                             Eigen::VectorXcd::Unit(h.cols(), 0));
  res.beamformers.gain = 2.0 * power_budget * hp.squaredNorm();
  res.power =
      power_rfc(h, res.beamformers.p_t, res.beamformers.p_r, ctx.rectenna);
  return res;
}

}  // namespace pixelwpt
