// SPDX-License-Identifier: Apache-2.0
//
// pixelwpt: pixel-antenna MIMO wireless power transfer simulation library

#include "pixelwpt/dcc.hpp"

#include <algorithm>
#include <cmath>

#include "pixelwpt/rng.hpp"

namespace pixelwpt {

namespace {

Eigen::VectorXcd default_sca_init(const Eigen::MatrixXcd& h,
                                  double power_budget) {
  Eigen::Index best_row = 0;
  double best_norm = -1.0;
  for (Eigen::Index nn = 0; nn < h.rows(); ++nn) {
    const double r = h.row(nn).norm();
    if (r > best_norm) {
      best_norm = r;
      best_row = nn;
    }
  }
  if (best_norm <= 0.0)
    return std::sqrt(2.0 * power_budget) *
           Eigen::VectorXcd::Unit(h.cols(), 0);
  return std::sqrt(2.0 * power_budget) *
         (h.row(best_row).adjoint() / best_norm);
}

}  // namespace

ScaResult sca_transmit_beamforming(
    const Eigen::MatrixXcd& h, double power_budget, const RectennaParams& p,
    double tol, int max_iter, const Eigen::VectorXcd* init,
    const std::function<void(const ScaIterate&)>& on_iterate) {
  if (h.size() == 0) throw DimensionMismatch("sca: empty channel");
  if (!(power_budget > 0.0)) throw Error("sca: power budget must be positive");
  const Eigen::Index n = h.rows();
  const double scale = std::sqrt(2.0 * power_budget);

  ScaResult res;
  if (init != nullptr && init->size() != h.cols())
    throw DimensionMismatch("sca: init length differs from M");
  if (init != nullptr && init->norm() > 0.0) {
    res.p_t = scale * (*init / init->norm());
  } else {
    res.p_t = default_sca_init(h, power_budget);
  }
  res.objective = power_dcc(h, res.p_t, p);

  // beta_i beta_j zeta_i zeta_j (i+j) coefficients of the ascent direction
  const int terms = p.n_0 / 2;
  Eigen::VectorXd bz(terms);
  for (int t = 0; t < terms; ++t) {
    const int i = 2 * (t + 1);
    bz(t) = rectifier_coefficient(p, i) * harmonic_coefficient(i);
  }

  Eigen::VectorXcd a(h.cols());
  for (int k = 1; k <= max_iter; ++k) {
    const Eigen::VectorXcd y = h * res.p_t;
    a.setZero();
    for (Eigen::Index nn = 0; nn < n; ++nn) {
      const double r = std::norm(y(nn));
      double c = 0.0;
      for (int ti = 0; ti < terms; ++ti) {
        for (int tj = 0; tj < terms; ++tj) {
          const int ipj = 2 * (ti + tj + 2);
          c += bz(ti) * bz(tj) * ipj * std::pow(r, ipj / 2 - 1);
        }
      }
      a.noalias() += (c / p.r_l) * (h.row(nn).adjoint() * y(nn));
    }
    const double a_norm = a.norm();
    if (!(a_norm > 1e-300)) {
      res.zero_direction = true;
      break;
    }
    const Eigen::VectorXcd p_new = scale * (a / a_norm);
    const double obj_new = power_dcc(h, p_new, p);
    const double guard =
        1e-12 * std::max({std::abs(res.objective), std::abs(obj_new), 1e-300});
    if (obj_new < res.objective - guard)
      throw Error("sca: surrogate step decreased the objective");
    if (obj_new <= res.objective) break;  // fixed point up to roundoff
    if (on_iterate) {
      ScaIterate it;
      it.p_t = p_new;
      it.a = a;
      it.r = (h * p_new).cwiseAbs2();
      it.objective = obj_new;
      on_iterate(it);
    }
    const bool converged =
        obj_new - res.objective <= tol * std::max(res.objective, 1e-300);
    res.p_t = p_new;
    res.objective = obj_new;
    res.iterations = k;
    if (converged) break;
  }
  return res;
}

double power_dcc_of_coders(const CoderMatrix& b_t, const CoderMatrix& b_r,
                           const BeamspaceChannel& ch,
                           const Eigen::VectorXcd& p_t,
                           const PipelineContext& ctx) {
  const Eigen::MatrixXcd w_t = assemble_pattern_coders(
      b_t, ctx.antenna, ctx.basis, ctx.antenna_cfg, Side::Transmit);
  const Eigen::MatrixXcd w_r = assemble_pattern_coders(
      b_r, ctx.antenna, ctx.basis, ctx.antenna_cfg, Side::Receive);
  return power_dcc(effective_channel(ch, w_t, w_r), p_t, ctx.rectenna);
}

namespace {

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

}  // namespace

DccResult optimize_dcc_binary(const PipelineContext& ctx,
                              const BeamspaceChannel& ch, double power_budget,
                              const DccOptions& opts,
                              const CoderMatrix* init_bt,
                              const CoderMatrix* init_br) {
  const int ne = ctx.basis.n_eff;
  const int m = static_cast<int>(ch.h_c.cols()) / ne;
  const int n = static_cast<int>(ch.h_c.rows()) / ne;
  SystemEvaluator ev(ctx, ch, m, n);
  std::vector<std::uint8_t> bits = initial_bits(ctx, m, n, init_bt, init_br);

  Eigen::MatrixXcd h = ev.effective_from_bits(bits);
  ScaResult sca = sca_transmit_beamforming(h, power_budget, ctx.rectenna,
                                           opts.sca_tol, opts.sca_max_iter);
  Eigen::VectorXcd p_t = sca.p_t;
  double obj = sca.objective;

  DccResult res;
  for (int outer = 1; outer <= opts.outer_max_iter; ++outer) {
    const double prev = obj;
    // Coding step with the beamformer fixed.
    SeboConfig sebo = opts.sebo;
    sebo.rng_seed = derive_seed(opts.sebo.rng_seed, outer);
    const SeboResult sr = sebo_maximize(
        [&](const std::vector<std::uint8_t>& b) {
          return power_dcc(ev.effective_from_bits(b), p_t, ctx.rectenna);
        },
        ev.total_bits(), bits, sebo);
    if (sr.value < obj - 1e-9 * std::max(obj, 1e-300))
      throw Error("dcc alternation: coding step decreased the objective");
    if (sr.value >= obj) {
      bits = sr.bits;
      obj = sr.value;
    }
    // Beamforming step with the coders fixed, warm-started. Steps are
    // accepted only when they do not decrease the incumbent, so the
    // objective chain is non-decreasing in exact arithmetic.
    h = ev.effective_from_bits(bits);
    sca = sca_transmit_beamforming(h, power_budget, ctx.rectenna, opts.sca_tol,
                                   opts.sca_max_iter, &p_t);
    if (sca.objective < obj - 1e-9 * std::max(obj, 1e-300))
      throw Error("dcc alternation: beamforming step decreased the objective");
    if (sca.objective >= obj) {
      p_t = sca.p_t;
      obj = sca.objective;
    }
    res.outer_iterations = outer;
    if (obj - prev <= opts.outer_tol * std::max(prev, 1e-300)) break;
  }
  res.p_t = std::move(p_t);
  auto [bt, br] = unpack_coders(bits, ctx.antenna.q, m, n);
  res.b_t = std::move(bt);
  res.b_r = std::move(br);
  res.power = obj;
  return res;
}

DccResult optimize_dcc_continuous(const PipelineContext& ctx,
                                  const BeamspaceChannel& ch,
                                  double power_budget, const DccOptions& opts,
                                  const DccResult* binary_incumbent) {
  const int ne = ctx.basis.n_eff;
  const int m = static_cast<int>(ch.h_c.cols()) / ne;
  const int n = static_cast<int>(ch.h_c.rows()) / ne;
  const int q = ctx.antenna.q;
  const int dim = (m + n) * q;

  DccResult binary;
  if (binary_incumbent == nullptr) {
    binary = optimize_dcc_binary(ctx, ch, power_budget, opts);
    binary_incumbent = &binary;
  }

  SystemEvaluator ev(ctx, ch, m, n);
  // Binary incumbent mapped into reactance space: |x| = x_oc b with b in
  // {0, 1} reproduces the binary loads exactly.
  Eigen::VectorXd x(dim);
  {
    const std::vector<std::uint8_t> bits =
        pack_coders(binary_incumbent->b_t, binary_incumbent->b_r);
    for (int i = 0; i < dim; ++i)
      x(i) = ctx.antenna_cfg.x_oc * static_cast<double>(bits[i]);
  }
  Eigen::VectorXcd p_t = binary_incumbent->p_t;
  double obj = power_dcc(ev.effective_from_reactances(x), p_t, ctx.rectenna);

  DccResult res;
  for (int outer = 1; outer <= opts.outer_max_iter; ++outer) {
    const double prev = obj;
    QuasiNewtonConfig qn = opts.qn;
    qn.rng_seed = derive_seed(opts.qn.rng_seed, outer);
    // Full multi-start on the first coding step; later steps refine the
    // incumbent.
    if (outer > 1) qn.restarts = 1;
    // The optimizer sees the objective normalized by the incumbent so its
    // gradient tolerance is meaningful at any power level; value >= 1 at
    // the incumbent start keeps the dominance chain exact.
    const double ref = obj > 0.0 ? obj : 1.0;
    const QuasiNewtonResult qr = quasi_newton_maximize(
        [&](const Eigen::VectorXd& xc) {
          return power_dcc(ev.effective_from_reactances(xc), p_t,
                           ctx.rectenna) /
                 ref;
        },
        dim, qn, {x});
    const double cand = qr.value * ref;
    if (cand < obj - 1e-9 * std::max(obj, 1e-300))
      throw Error("dcc alternation: coding step decreased the objective");
    if (cand >= obj) {
      x = qr.x;
      obj = cand;
    }
    const Eigen::MatrixXcd h = ev.effective_from_reactances(x);
    const ScaResult sca = sca_transmit_beamforming(
        h, power_budget, ctx.rectenna, opts.sca_tol, opts.sca_max_iter, &p_t);
    if (sca.objective < obj - 1e-9 * std::max(obj, 1e-300))
      throw Error("dcc alternation: beamforming step decreased the objective");
    if (sca.objective >= obj) {
      p_t = sca.p_t;
      obj = sca.objective;
    }
    res.outer_iterations = outer;
    if (obj - prev <= opts.outer_tol * std::max(prev, 1e-300)) break;
  }

  res.p_t = std::move(p_t);
  auto [x_t, x_r] = unstack_reactances(x, q, m, n);
  res.x_t = std::move(x_t);
  res.x_r = std::move(x_r);
  auto clamp_coders = [&](const Eigen::MatrixXd& xm) {
    CoderMatrix cm;
    for (Eigen::Index j = 0; j < xm.cols(); ++j) {
      AntennaCoder c;
      c.mode = CoderMode::Continuous;
      c.b = (xm.col(j).cwiseAbs() / ctx.antenna_cfg.x_oc)
                .cwiseMin(1.0)
                .cwiseMax(0.0);
      cm.columns.push_back(std::move(c));
    }
    return cm;
  };
  res.b_t = clamp_coders(res.x_t);
  res.b_r = clamp_coders(res.x_r);
  res.power = obj;
  return res;
}

}  // namespace pixelwpt
