// SPDX-License-Identifier: Apache-2.0
//
// pixelwpt: pixel-antenna MIMO wireless power transfer simulation library

#include "pixelwpt/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "pixelwpt/rng.hpp"

namespace pixelwpt {

namespace {

constexpr std::uint64_t kTagChannel = 101;
constexpr std::uint64_t kTagSebo = 202;
constexpr std::uint64_t kTagQn = 303;
constexpr std::uint64_t kTagAntenna = 404;

std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::DccOpt: return "dcc_opt";
    case Scheme::RfcSvd: return "rfc_svd";
    case Scheme::RfcAbf: return "rfc_abf";
  }
  return "dcc_opt";
}

std::string to_string(Coding c) {
  switch (c) {
    case Coding::Fixed: return "fixed";
    case Coding::Binary: return "binary";
    case Coding::Continuous: return "continuous";
    case Coding::Codebook: return "codebook";
  }
  return "fixed";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "dcc_opt") return Scheme::DccOpt;
  if (s == "rfc_svd") return Scheme::RfcSvd;
  if (s == "rfc_abf") return Scheme::RfcAbf;
  throw ConfigInvalid("scheme", "unknown scheme '" + s + "'");
}

Coding coding_from_string(const std::string& s) {
  if (s == "fixed") return Coding::Fixed;
  if (s == "binary") return Coding::Binary;
  if (s == "continuous") return Coding::Continuous;
  if (s == "codebook") return Coding::Codebook;
  throw ConfigInvalid("coding", "unknown coding '" + s + "'");
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) {
  if (!(watts > 0.0)) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(watts * 1000.0);
}

std::uint64_t trial_channel_seed(std::uint64_t master_seed, int trial) {
  return derive_seed(derive_seed(master_seed, kTagChannel), trial);
}
std::uint64_t trial_sebo_seed(std::uint64_t master_seed, int trial) {
  return derive_seed(derive_seed(master_seed, kTagSebo), trial);
}
std::uint64_t trial_qn_seed(std::uint64_t master_seed, int trial) {
  return derive_seed(derive_seed(master_seed, kTagQn), trial);
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.m < 1) throw ConfigInvalid("m", "must be >= 1");
  if (cfg.n < 1) throw ConfigInvalid("n", "must be >= 1");
  if (cfg.q < 1 || cfg.q > 63) throw ConfigInvalid("q", "must lie in [1, 63]");
  if (cfg.k < 1) throw ConfigInvalid("k", "must be >= 1");
  if (cfg.target_rank < 1 ||
      cfg.target_rank > std::min(2 * cfg.k, cfg.q + 1))
    throw ConfigInvalid("target_rank", "must lie in [1, min(2k, q+1)]");
  if (!std::isfinite(cfg.transmit_power_dbm))
    throw ConfigInvalid("transmit_power_dbm", "must be finite");
  if (!std::isfinite(cfg.path_loss_db) || cfg.path_loss_db < 0.0)
    throw ConfigInvalid("path_loss_db", "must be finite and >= 0");
  if (cfg.trials < 1) throw ConfigInvalid("trials", "must be >= 1");
  if (cfg.workers < 1) throw ConfigInvalid("workers", "must be >= 1");
  try {
    validate(cfg.rectenna);
  } catch (const Error& e) {
    throw ConfigInvalid("rectenna", e.what());
  }
  try {
    validate(cfg.antenna);
  } catch (const Error& e) {
    throw ConfigInvalid("antenna", e.what());
  }
  if (cfg.sebo.block_size < 1 || cfg.sebo.block_size > 30)
    throw ConfigInvalid("sebo.block_size", "must lie in [1, 30]");
  if (cfg.sebo.rounds < 1) throw ConfigInvalid("sebo.rounds", "must be >= 1");
  if (cfg.qn.restarts < 1) throw ConfigInvalid("qn.restarts", "must be >= 1");
  if (!(cfg.qn.init_lo <= cfg.qn.init_hi))
    throw ConfigInvalid("qn.init_lo", "init range is empty");
  if (cfg.coding == Coding::Codebook) {
    if (cfg.codebook_path.empty())
      throw ConfigInvalid("codebook_path", "required when coding = codebook");
    if (cfg.scheme == Scheme::RfcAbf)
      throw ConfigInvalid("scheme", "codebook coding supports dcc_opt and rfc_svd");
  }
  if (!cfg.baseline_coder.empty()) {
    if (static_cast<int>(cfg.baseline_coder.size()) != cfg.q)
      throw ConfigInvalid("baseline_coder", "bit string length differs from q");
    for (char c : cfg.baseline_coder)
      if (c != '0' && c != '1')
        throw ConfigInvalid("baseline_coder", "must be a 0/1 bit string");
  }
}

std::pair<CoderMatrix, CoderMatrix> fixed_baseline(
    const ExperimentConfig& cfg) {
  AntennaCoder base;
  base.mode = CoderMode::Binary;
  base.b = Eigen::VectorXd::Zero(cfg.q);
  if (!cfg.baseline_coder.empty()) {
    for (int i = 0; i < cfg.q; ++i)
      base.b(i) = cfg.baseline_coder[i] == '1' ? 1.0 : 0.0;
  }
  CoderMatrix b_t;
  CoderMatrix b_r;
  for (int i = 0; i < cfg.m; ++i) b_t.columns.push_back(base);
  for (int i = 0; i < cfg.n; ++i) b_r.columns.push_back(base);
  return {std::move(b_t), std::move(b_r)};
}

MultiportNetwork experiment_antenna(const ExperimentConfig& cfg) {
  if (!cfg.antenna_path.empty()) {
    MultiportNetwork net = load_antenna(cfg.antenna_path);
    if (net.q != cfg.q || net.k != cfg.k)
      throw ConfigInvalid("antenna_path",
                          "antenna file geometry differs from config q/k");
    return net;
  }
  return synthesize_antenna(derive_seed(cfg.master_seed, kTagAntenna), cfg.q,
                            cfg.k, cfg.target_rank, cfg.antenna);
}

namespace {

DccOptions dcc_options(const ExperimentConfig& cfg, int trial) {
  DccOptions o;
  o.sebo = cfg.sebo;
  o.sebo.rng_seed = trial_sebo_seed(cfg.master_seed, trial);
  o.qn = cfg.qn;
  o.qn.rng_seed = trial_qn_seed(cfg.master_seed, trial);
  o.sca_tol = cfg.sca_tol;
  o.sca_max_iter = cfg.sca_max_iter;
  o.outer_tol = cfg.outer_tol;
  o.outer_max_iter = cfg.outer_max_iter;
  return o;
}

RfcOptions rfc_options(const ExperimentConfig& cfg, int trial) {
  RfcOptions o;
  o.sebo = cfg.sebo;
  o.sebo.rng_seed = trial_sebo_seed(cfg.master_seed, trial);
  o.qn = cfg.qn;
  o.qn.rng_seed = trial_qn_seed(cfg.master_seed, trial);
  o.abf_tol = cfg.abf_tol;
  o.abf_max_iter = cfg.abf_max_iter;
  o.outer_tol = cfg.outer_tol;
  o.outer_max_iter = cfg.outer_max_iter;
  return o;
}

TrialResult run_trial(const PipelineContext& ctx, const ExperimentConfig& cfg,
                      const Codebook* cb, int trial) {
  TrialResult tr;
  tr.trial_index = trial;
  tr.scheme = cfg.scheme;
  tr.coding = cfg.coding;
  const auto t0 = std::chrono::steady_clock::now();

  const double power_budget = dbm_to_watts(cfg.transmit_power_dbm);
  const double amp_scale = std::pow(10.0, -cfg.path_loss_db / 20.0);
  const int ne = ctx.basis.n_eff;
  const BeamspaceChannel ch =
      sample_channel(trial_channel_seed(cfg.master_seed, trial), cfg.n * ne,
                     cfg.m * ne, amp_scale);
  auto [base_bt, base_br] = fixed_baseline(cfg);

  switch (cfg.coding) {
    case Coding::Fixed: {
      SystemEvaluator ev(ctx, ch, cfg.m, cfg.n);
      const std::vector<std::uint8_t> bits = pack_coders(base_bt, base_br);
      const Eigen::MatrixXcd h = ev.effective_from_bits(bits);
      if (cfg.scheme == Scheme::DccOpt) {
        const ScaResult sca = sca_transmit_beamforming(
            h, power_budget, ctx.rectenna, cfg.sca_tol, cfg.sca_max_iter);
        tr.power_watts = sca.objective;
      } else if (cfg.scheme == Scheme::RfcSvd) {
        const RfcBeamformers bf = svd_beamformers(h, power_budget);
        tr.power_watts = power_rfc(h, bf.p_t, bf.p_r, ctx.rectenna);
      } else {
        const AbfResult abf = abf_receive_beamforming(
            h, power_budget, cfg.abf_tol, cfg.abf_max_iter);
        tr.power_watts = power_rfc(h, abf.beamformers.p_t, abf.beamformers.p_r,
                                   ctx.rectenna);
      }
      tr.iterations_outer = 0;
      break;
    }
    case Coding::Binary: {
      if (cfg.scheme == Scheme::DccOpt) {
        const DccResult r = optimize_dcc_binary(
            ctx, ch, power_budget, dcc_options(cfg, trial), &base_bt, &base_br);
        tr.power_watts = r.power;
        tr.iterations_outer = r.outer_iterations;
      } else if (cfg.scheme == Scheme::RfcSvd) {
        const RfcResult r = optimize_rfc_binary(
            ctx, ch, power_budget, rfc_options(cfg, trial), &base_bt, &base_br);
        tr.power_watts = r.power;
        tr.iterations_outer = r.outer_iterations;
      } else {
        const RfcResult r = optimize_abf_binary(
            ctx, ch, power_budget, rfc_options(cfg, trial), &base_bt, &base_br);
        tr.power_watts = r.power;
        tr.iterations_outer = r.outer_iterations;
      }
      break;
    }
    case Coding::Continuous: {
      if (cfg.scheme == Scheme::DccOpt) {
        const DccResult r =
            optimize_dcc_continuous(ctx, ch, power_budget, dcc_options(cfg, trial));
        tr.power_watts = r.power;
        tr.iterations_outer = r.outer_iterations;
      } else if (cfg.scheme == Scheme::RfcSvd) {
        const RfcResult r =
            optimize_rfc_continuous(ctx, ch, power_budget, rfc_options(cfg, trial));
        tr.power_watts = r.power;
        tr.iterations_outer = r.outer_iterations;
      } else {
        const RfcResult r =
            optimize_abf_continuous(ctx, ch, power_budget, rfc_options(cfg, trial));
        tr.power_watts = r.power;
        tr.iterations_outer = r.outer_iterations;
      }
      break;
    }
    case Coding::Codebook: {
      DeployOptions d;
      d.sca_tol = cfg.sca_tol;
      const CodingScheme cs = cfg.scheme == Scheme::DccOpt
                                  ? CodingScheme::DccOpt
                                  : CodingScheme::RfcSvd;
      const DeployResult r = deploy_codebook(ctx, ch, *cb, cs, power_budget,
                                             cfg.m, cfg.n, d);
      tr.power_watts = r.power;
      tr.iterations_outer = r.sweeps;
      break;
    }
  }

  tr.power_dbm = watts_to_dbm(tr.power_watts);
  tr.wall_time_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
  return tr;
}

ExperimentResult run_experiment_impl(const ExperimentConfig& cfg,
                                     const Codebook* cb_override) {
  validate(cfg);
  Codebook cb_local;
  const Codebook* cb = cb_override;
  if (cfg.coding == Coding::Codebook && cb == nullptr) {
    cb_local = load_codebook(cfg.codebook_path);
    cb = &cb_local;
  }
  const PipelineContext ctx =
      make_context(experiment_antenna(cfg), cfg.antenna, cfg.rectenna);

  ExperimentResult result;
  result.trials.resize(cfg.trials);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= cfg.trials) break;
      TrialResult& tr = result.trials[t];
      try {
        tr = run_trial(ctx, cfg, cb, t);
      } catch (const Error& e) {
        tr.trial_index = t;
        tr.scheme = cfg.scheme;
        tr.coding = cfg.coding;
        tr.failed = true;
        tr.error = e.what();
      }
    }
  };
  const int workers = std::min(cfg.workers, cfg.trials);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  double sum = 0.0;
  for (const TrialResult& tr : result.trials) {
    if (tr.failed) {
      ++result.summary.trials_failed;
    } else {
      ++result.summary.trials_ok;
      sum += tr.power_watts;
    }
  }
  if (result.summary.trials_ok > 0)
    result.summary.mean_watts = sum / result.summary.trials_ok;
  result.summary.mean_dbm = watts_to_dbm(result.summary.mean_watts);
  if (result.summary.trials_failed > 0 &&
      result.summary.trials_failed * 100 > cfg.trials) {
    std::string first_error;
    for (const TrialResult& tr : result.trials)
      if (tr.failed) {
        first_error = tr.error;
        break;
      }
    throw Error("trial failure rate above 1% (" +
                std::to_string(result.summary.trials_failed) + "/" +
                std::to_string(cfg.trials) + "); first error: " + first_error);
  }
  return result;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  return run_experiment_impl(cfg, nullptr);
}

void write_csv(const ExperimentResult& result, std::ostream& out,
               bool timing) {
  out << "trial,scheme,coding,power_watts,power_dbm,iterations,wall_ms\n";
  for (const TrialResult& tr : result.trials) {
    if (tr.failed) continue;
    out << tr.trial_index << ',' << to_string(tr.scheme) << ','
        << to_string(tr.coding) << ',' << fmt_g17(tr.power_watts) << ','
        << fmt_g17(tr.power_dbm) << ',' << tr.iterations_outer << ','
        << fmt_g17(timing ? tr.wall_time_ms : 0.0) << '\n';
  }
  out << "# mean_watts=" << fmt_g17(result.summary.mean_watts)
      << ",mean_dbm=" << fmt_g17(result.summary.mean_dbm)
      << ",trials_ok=" << result.summary.trials_ok
      << ",trials_failed=" << result.summary.trials_failed << '\n';
}

std::vector<SweepRow> sweep(const ExperimentConfig& cfg_template,
                            SweepAxis axis,
                            const std::vector<double>& values) {
  if (values.empty()) throw ConfigInvalid("values", "sweep needs values");
  std::vector<SweepRow> rows;
  Codebook full;
  if (axis == SweepAxis::CodebookSize) {
    if (cfg_template.coding != Coding::Codebook)
      throw ConfigInvalid("coding", "codebook_size sweep needs coding=codebook");
    full = load_codebook(cfg_template.codebook_path);
  }
  for (double v : values) {
    ExperimentConfig cfg = cfg_template;
    if (axis == SweepAxis::ReceiveAntennas) {
      const int n = static_cast<int>(v);
      if (n < 1 || static_cast<double>(n) != v)
        throw ConfigInvalid("values", "receive antenna counts must be positive integers");
      cfg.n = n;
      rows.push_back({v, run_experiment_impl(cfg, nullptr).summary});
    } else {
      const int d = static_cast<int>(v);
      if (d < 1 || static_cast<double>(d) != v)
        throw ConfigInvalid("values", "codebook sizes must be positive integers");
      if (d > static_cast<int>(full.codewords.size()))
        throw ConfigInvalid("values", "codebook size exceeds the loaded codebook");
      Codebook prefix;
      prefix.q = full.q;
      prefix.codewords.assign(full.codewords.begin(),
                              full.codewords.begin() + d);
      rows.push_back({v, run_experiment_impl(cfg, &prefix).summary});
    }
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, SweepAxis axis,
                     std::ostream& out) {
  out << "axis,value,mean_watts,mean_dbm,trials_ok,trials_failed\n";
  const std::string name =
      axis == SweepAxis::ReceiveAntennas ? "receive_antennas" : "codebook_size";
  for (const SweepRow& r : rows) {
    out << name << ',' << fmt_g17(r.axis_value) << ','
        << fmt_g17(r.summary.mean_watts) << ',' << fmt_g17(r.summary.mean_dbm)
        << ',' << r.summary.trials_ok << ',' << r.summary.trials_failed
        << '\n';
  }
}

namespace {

template <typename T>
T get_field(const nlohmann::json& j, const std::string& path,
            const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigInvalid(path.empty() ? key : path + "." + key,
                        "wrong type or value");
  }
}

void reject_unknown(const nlohmann::json& j, const std::string& path,
                    const std::vector<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const std::string& a : allowed)
      if (it.key() == a) {
        ok = true;
        break;
      }
    if (!ok)
      throw ConfigInvalid(path.empty() ? it.key() : path + "." + it.key(),
                          "unknown field");
  }
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigInvalid("(root)", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigInvalid("(root)", "config must be an object");
  reject_unknown(j, "",
                 {"m", "n", "q", "k", "target_rank", "scheme", "coding",
                  "transmit_power_dbm", "path_loss_db", "trials", "master_seed",
                  "rectenna", "sebo", "qn", "antenna", "codebook_path",
                  "antenna_path", "outer_tol", "outer_max_iter", "sca_tol",
                  "sca_max_iter", "abf_tol", "abf_max_iter", "workers",
                  "baseline_coder"});
  ExperimentConfig cfg;
  cfg.m = get_field(j, "", "m", cfg.m);
  cfg.n = get_field(j, "", "n", cfg.n);
  cfg.q = get_field(j, "", "q", cfg.q);
  cfg.k = get_field(j, "", "k", cfg.k);
  cfg.target_rank = get_field(j, "", "target_rank", cfg.target_rank);
  cfg.scheme = scheme_from_string(
      get_field<std::string>(j, "", "scheme", to_string(cfg.scheme)));
  cfg.coding = coding_from_string(
      get_field<std::string>(j, "", "coding", to_string(cfg.coding)));
  cfg.transmit_power_dbm =
      get_field(j, "", "transmit_power_dbm", cfg.transmit_power_dbm);
  cfg.path_loss_db = get_field(j, "", "path_loss_db", cfg.path_loss_db);
  cfg.trials = get_field(j, "", "trials", cfg.trials);
  cfg.master_seed = get_field(j, "", "master_seed", cfg.master_seed);
  if (j.contains("rectenna")) {
    const auto& r = j.at("rectenna");
    reject_unknown(r, "rectenna", {"r_ant", "r_l", "i_d", "v_t", "n_0"});
    cfg.rectenna.r_ant = get_field(r, "rectenna", "r_ant", cfg.rectenna.r_ant);
    cfg.rectenna.r_l = get_field(r, "rectenna", "r_l", cfg.rectenna.r_l);
    cfg.rectenna.i_d = get_field(r, "rectenna", "i_d", cfg.rectenna.i_d);
    cfg.rectenna.v_t = get_field(r, "rectenna", "v_t", cfg.rectenna.v_t);
    cfg.rectenna.n_0 = get_field(r, "rectenna", "n_0", cfg.rectenna.n_0);
  }
  if (j.contains("sebo")) {
    const auto& s = j.at("sebo");
    reject_unknown(s, "sebo",
                   {"block_size", "rounds", "flip_count", "max_sweeps"});
    cfg.sebo.block_size = get_field(s, "sebo", "block_size", cfg.sebo.block_size);
    cfg.sebo.rounds = get_field(s, "sebo", "rounds", cfg.sebo.rounds);
    cfg.sebo.flip_count = get_field(s, "sebo", "flip_count", cfg.sebo.flip_count);
    cfg.sebo.max_sweeps = get_field(s, "sebo", "max_sweeps", cfg.sebo.max_sweeps);
  }
  if (j.contains("qn")) {
    const auto& q = j.at("qn");
    reject_unknown(q, "qn",
                   {"restarts", "init_lo", "init_hi", "gradient_step",
                    "tolerance", "max_iters"});
    cfg.qn.restarts = get_field(q, "qn", "restarts", cfg.qn.restarts);
    cfg.qn.init_lo = get_field(q, "qn", "init_lo", cfg.qn.init_lo);
    cfg.qn.init_hi = get_field(q, "qn", "init_hi", cfg.qn.init_hi);
    cfg.qn.gradient_step =
        get_field(q, "qn", "gradient_step", cfg.qn.gradient_step);
    cfg.qn.tolerance = get_field(q, "qn", "tolerance", cfg.qn.tolerance);
    cfg.qn.max_iters = get_field(q, "qn", "max_iters", cfg.qn.max_iters);
  }
  if (j.contains("antenna")) {
    const auto& a = j.at("antenna");
    reject_unknown(a, "antenna", {"x_oc", "power_fraction"});
    cfg.antenna.x_oc = get_field(a, "antenna", "x_oc", cfg.antenna.x_oc);
    cfg.antenna.power_fraction =
        get_field(a, "antenna", "power_fraction", cfg.antenna.power_fraction);
  }
  cfg.codebook_path = get_field(j, "", "codebook_path", cfg.codebook_path);
  cfg.antenna_path = get_field(j, "", "antenna_path", cfg.antenna_path);
  cfg.outer_tol = get_field(j, "", "outer_tol", cfg.outer_tol);
  cfg.outer_max_iter = get_field(j, "", "outer_max_iter", cfg.outer_max_iter);
  cfg.sca_tol = get_field(j, "", "sca_tol", cfg.sca_tol);
  cfg.sca_max_iter = get_field(j, "", "sca_max_iter", cfg.sca_max_iter);
  cfg.abf_tol = get_field(j, "", "abf_tol", cfg.abf_tol);
  cfg.abf_max_iter = get_field(j, "", "abf_max_iter", cfg.abf_max_iter);
  cfg.workers = get_field(j, "", "workers", cfg.workers);
  cfg.baseline_coder = get_field(j, "", "baseline_coder", cfg.baseline_coder);
  validate(cfg);
  return cfg;
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["m"] = cfg.m;
  j["n"] = cfg.n;
  j["q"] = cfg.q;
  j["k"] = cfg.k;
  j["target_rank"] = cfg.target_rank;
  j["scheme"] = to_string(cfg.scheme);
  j["coding"] = to_string(cfg.coding);
  j["transmit_power_dbm"] = cfg.transmit_power_dbm;
  j["path_loss_db"] = cfg.path_loss_db;
  j["trials"] = cfg.trials;
  j["master_seed"] = cfg.master_seed;
  j["rectenna"] = {{"r_ant", cfg.rectenna.r_ant},
                   {"r_l", cfg.rectenna.r_l},
                   {"i_d", cfg.rectenna.i_d},
                   {"v_t", cfg.rectenna.v_t},
                   {"n_0", cfg.rectenna.n_0}};
  j["sebo"] = {{"block_size", cfg.sebo.block_size},
               {"rounds", cfg.sebo.rounds},
               {"flip_count", cfg.sebo.flip_count},
               {"max_sweeps", cfg.sebo.max_sweeps}};
  j["qn"] = {{"restarts", cfg.qn.restarts},
             {"init_lo", cfg.qn.init_lo},
             {"init_hi", cfg.qn.init_hi},
             {"gradient_step", cfg.qn.gradient_step},
             {"tolerance", cfg.qn.tolerance},
             {"max_iters", cfg.qn.max_iters}};
  j["antenna"] = {{"x_oc", cfg.antenna.x_oc},
                  {"power_fraction", cfg.antenna.power_fraction}};
  if (!cfg.codebook_path.empty()) j["codebook_path"] = cfg.codebook_path;
  if (!cfg.antenna_path.empty()) j["antenna_path"] = cfg.antenna_path;
  j["outer_tol"] = cfg.outer_tol;
  j["outer_max_iter"] = cfg.outer_max_iter;
  j["sca_tol"] = cfg.sca_tol;
  j["sca_max_iter"] = cfg.sca_max_iter;
  j["abf_tol"] = cfg.abf_tol;
  j["abf_max_iter"] = cfg.abf_max_iter;
  j["workers"] = cfg.workers;
  if (!cfg.baseline_coder.empty()) j["baseline_coder"] = cfg.baseline_coder;
  return j.dump(2);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  ExperimentConfig cfg = config_from_json_text(ss.str());
  if (const char* env = std::getenv("PIXELWPT_SEED")) {
    try {
      cfg.master_seed = std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigInvalid("PIXELWPT_SEED", "must be an unsigned integer");
    }
  }
  return cfg;
}

}  // namespace pixelwpt
