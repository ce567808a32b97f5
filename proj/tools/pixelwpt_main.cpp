// SPDX-License-Identifier: Apache-2.0
//
// pixelwpt: pixel-antenna MIMO wireless power transfer simulation library

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pixelwpt/harness.hpp"
#include "pixelwpt/rng.hpp"

namespace {

using namespace pixelwpt;

void apply_paper_scale(ExperimentConfig& cfg) {
  cfg.q = 39;
  cfg.k = 72;
  cfg.target_rank = 7;
  cfg.trials = 1000;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file: " + path);
  out << text;
}

int cmd_run(const std::string& config_path, const std::string& out_path,
            int workers, bool paper_scale, bool timing,
            const std::string& baseline_coder) {
  ExperimentConfig cfg = load_config(config_path);
  if (paper_scale) apply_paper_scale(cfg);
  if (workers > 0) cfg.workers = workers;
  if (!baseline_coder.empty()) cfg.baseline_coder = baseline_coder;
  const ExperimentResult result = run_experiment(cfg);
  std::ostringstream csv;
  write_csv(result, csv, timing);
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    write_text_file(out_path, csv.str());
  }
  std::cerr << "mean output power: " << result.summary.mean_watts << " W ("
            << result.summary.mean_dbm << " dBm), " << result.summary.trials_ok
            << " trials ok, " << result.summary.trials_failed << " failed\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& axis_name,
              const std::string& values_csv, const std::string& out_path,
              int workers) {
  ExperimentConfig cfg = load_config(config_path);
  if (workers > 0) cfg.workers = workers;
  SweepAxis axis;
  if (axis_name == "receive_antennas") {
    axis = SweepAxis::ReceiveAntennas;
  } else if (axis_name == "codebook_size") {
    axis = SweepAxis::CodebookSize;
  } else {
    throw ConfigInvalid("axis", "must be receive_antennas or codebook_size");
  }
  std::vector<double> values;
  std::stringstream ss(values_csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    values.push_back(std::stod(tok));
  }
  const std::vector<SweepRow> rows = sweep(cfg, axis, values);
  std::ostringstream csv;
  write_sweep_csv(rows, axis, csv);
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    write_text_file(out_path, csv.str());
  }
  return 0;
}

int cmd_train_codebook(const std::string& config_path, int pool_channels,
                       int size, const std::string& out_path,
                       const std::string& scheme_name) {
  ExperimentConfig cfg = load_config(config_path);
  const PipelineContext ctx =
      make_context(experiment_antenna(cfg), cfg.antenna, cfg.rectenna);

  Codebook cb;
  if (scheme_name == "random") {
    cb = random_codebook(cfg.q, size, derive_seed(cfg.master_seed, 777));
  } else {
    PoolOptions po;
    po.power_budget = dbm_to_watts(cfg.transmit_power_dbm);
    if (scheme_name == "dcc_opt") {
      po.scheme = CodingScheme::DccOpt;
      po.m = cfg.m;
      po.n = cfg.n;
    } else if (scheme_name == "rfc_svd") {
      po.scheme = CodingScheme::RfcSvd;
      po.m = cfg.m;
      po.n = cfg.n;
    } else if (scheme_name == "siso_gain") {
      // Benchmark codebook trained on single-antenna channel gain.
      po.scheme = CodingScheme::RfcSvd;
      po.m = 1;
      po.n = 1;
    } else {
      throw ConfigInvalid("scheme",
                          "must be dcc_opt, rfc_svd, siso_gain, or random");
    }
    po.dcc.sebo = cfg.sebo;
    po.rfc.sebo = cfg.sebo;
    po.dcc.qn = cfg.qn;
    po.rfc.qn = cfg.qn;
    const double amp_scale = std::pow(10.0, -cfg.path_loss_db / 20.0);
    const int ne = ctx.basis.n_eff;
    std::vector<BeamspaceChannel> training;
    training.reserve(pool_channels);
    for (int t = 0; t < pool_channels; ++t) {
      const std::uint64_t seed =
          trial_channel_seed(derive_seed(cfg.master_seed, 888), t);
      training.push_back(
          sample_channel(seed, po.n * ne, po.m * ne, amp_scale));
      po.rfc.sebo.rng_seed = trial_sebo_seed(cfg.master_seed, t);
      po.dcc.sebo.rng_seed = po.rfc.sebo.rng_seed;
    }
    const CoderPool pool = build_pool(ctx, training, po);
    CodebookTrainOptions to;
    to.sebo = cfg.sebo;
    to.rng_seed = derive_seed(cfg.master_seed, 999);
    TrainDiagnostics diag;
    cb = train_codebook(pool, size, to, &diag);
    std::cerr << "trained codebook: " << diag.iterations << " iterations, "
              << "final distortion " << diag.distortion_per_iter.back()
              << ", duplicates " << diag.duplicate_codewords << "\n";
  }
  save_codebook(cb, out_path);
  std::cerr << "wrote " << out_path << "\n";
  return 0;
}

int cmd_gen_antenna(std::uint64_t seed, int q, int k, int rank,
                    const std::string& out_path) {
  AntennaConfig acfg;
  const MultiportNetwork net = synthesize_antenna(seed, q, k, rank, acfg);
  save_antenna(net, out_path);
  std::cerr << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pixel-antenna MIMO wireless power transfer simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  int workers = 0;
  bool paper_scale = false;
  bool timing = false;
  std::string baseline_coder;

  CLI::App* run = app.add_subcommand("run", "run a Monte Carlo experiment");
  run->add_option("--config", config_path, "config JSON path")->required();
  run->add_option("--out", out_path, "output CSV path (stdout if omitted)");
  run->add_option("--workers", workers, "concurrent trial workers");
  run->add_flag("--paper-scale", paper_scale,
                "preset q=39, k=72, rank=7, trials=1000");
  run->add_flag("--timing", timing,
                "record measured wall_ms per trial (breaks byte-identical reruns)");
  run->add_option("--baseline-coder", baseline_coder,
                  "explicit fixed-configuration bit string");

  std::string axis;
  std::string values;
  CLI::App* sw = app.add_subcommand("sweep", "sweep one experiment axis");
  sw->add_option("--config", config_path, "config JSON path")->required();
  sw->add_option("--axis", axis, "receive_antennas or codebook_size")
      ->required();
  sw->add_option("--values", values, "comma-separated axis values")->required();
  sw->add_option("--out", out_path, "output CSV path (stdout if omitted)");
  sw->add_option("--workers", workers, "concurrent trial workers");

  int pool_channels = 100;
  int size = 8;
  std::string scheme_name = "rfc_svd";
  CLI::App* train =
      app.add_subcommand("train-codebook", "offline codebook training");
  train->add_option("--config", config_path, "config JSON path")->required();
  train->add_option("--pool-channels", pool_channels,
                    "training channel count N0");
  train->add_option("--size", size, "codebook size D");
  train->add_option("--out", out_path, "output codebook JSON path")->required();
  train->add_option("--scheme", scheme_name,
                    "dcc_opt, rfc_svd, siso_gain, or random");

  std::uint64_t seed = 1;
  int q = 10;
  int k = 16;
  int rank = 4;
  CLI::App* gen =
      app.add_subcommand("gen-antenna", "synthesize an antenna data file");
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--q", q, "pixel port count");
  gen->add_option("--k", k, "spatial angle sample count");
  gen->add_option("--rank", rank, "target basis rank");
  gen->add_option("--out", out_path, "output antenna JSON path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(config_path, out_path, workers, paper_scale, timing,
                     baseline_coder);
    if (sw->parsed()) return cmd_sweep(config_path, axis, values, out_path, workers);
    if (train->parsed())
      return cmd_train_codebook(config_path, pool_channels, size, out_path,
                                scheme_name);
    if (gen->parsed()) return cmd_gen_antenna(seed, q, k, rank, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
