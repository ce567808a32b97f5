// SPDX-License-Identifier: Apache-2.0
//
// pixelwpt: pixel-antenna MIMO wireless power transfer simulation library

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pixelwpt/codebook.hpp"

namespace pixelwpt {

enum class Scheme { DccOpt, RfcSvd, RfcAbf };
enum class Coding { Fixed, Binary, Continuous, Codebook };

std::string to_string(Scheme s);
std::string to_string(Coding c);
Scheme scheme_from_string(const std::string& s);
Coding coding_from_string(const std::string& s);

struct ExperimentConfig {
  int m = 2;
  int n = 2;
  int q = 10;
  int k = 16;
  int target_rank = 4;
  Scheme scheme = Scheme::DccOpt;
  Coding coding = Coding::Fixed;
  double transmit_power_dbm = 36.0;
  double path_loss_db = 66.0;
  int trials = 200;
  std::uint64_t master_seed = 1;
  RectennaParams rectenna;
  SeboConfig sebo;
  QuasiNewtonConfig qn;
  AntennaConfig antenna;
  std::string codebook_path;  // required when coding == Codebook
  std::string antenna_path;   // optional; overrides the synthetic antenna
  double outer_tol = 1e-6;
  int outer_max_iter = 30;
  double sca_tol = 1e-8;
  int sca_max_iter = 200;
  double abf_tol = 1e-9;
  int abf_max_iter = 500;
  int workers = 1;
  std::string baseline_coder;  // optional bit string; default all zeros
};

void validate(const ExperimentConfig& cfg);

struct TrialResult {
  int trial_index = 0;
  Scheme scheme = Scheme::DccOpt;
  Coding coding = Coding::Fixed;
  double power_watts = 0.0;
  double power_dbm = 0.0;
  int iterations_outer = 0;
  double wall_time_ms = 0.0;
  bool failed = false;
  std::string error;
};

struct ExperimentSummary {
  double mean_watts = 0.0;
  double mean_dbm = 0.0;
  int trials_ok = 0;
  int trials_failed = 0;
};

struct ExperimentResult {
  std::vector<TrialResult> trials;
  ExperimentSummary summary;
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// The conventional fixed-configuration baseline: the same coder for every
/// antenna on both sides, all zeros (every switch connected) unless
/// cfg.baseline_coder supplies an explicit bit string.
std::pair<CoderMatrix, CoderMatrix> fixed_baseline(const ExperimentConfig& cfg);

/// Runs cfg.trials independent channel realizations. Trial t derives its
/// seeds from (master_seed, t), so results are reproducible and independent
/// of worker count. Failed trials are recorded, excluded from the mean, and
/// counted; a failure rate above 1% aborts the run.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Columns: trial,scheme,coding,power_watts,power_dbm,iterations,wall_ms and
/// a commented summary footer. wall_ms is written as 0 unless `timing` is
/// set, keeping reruns byte-identical.
void write_csv(const ExperimentResult& result, std::ostream& out,
               bool timing = false);

enum class SweepAxis { ReceiveAntennas, CodebookSize };

struct SweepRow {
  double axis_value = 0.0;
  ExperimentSummary summary;
};

/// One summary row per axis value with all other parameters and all seeds
/// held fixed (paired trials). The codebook_size axis deploys nested
/// prefixes of the loaded codebook.
std::vector<SweepRow> sweep(const ExperimentConfig& cfg_template,
                            SweepAxis axis, const std::vector<double>& values);

void write_sweep_csv(const std::vector<SweepRow>& rows, SweepAxis axis,
                     std::ostream& out);

ExperimentConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ExperimentConfig& cfg);

/// Loads a JSON config file and applies the PIXELWPT_SEED environment
/// override when present.
ExperimentConfig load_config(const std::string& path);

/// The antenna used by a run: loaded from cfg.antenna_path when set,
/// synthesized deterministically from the master seed otherwise.
MultiportNetwork experiment_antenna(const ExperimentConfig& cfg);

// Per-trial seed derivations, shared with the test suites.
std::uint64_t trial_channel_seed(std::uint64_t master_seed, int trial);
std::uint64_t trial_sebo_seed(std::uint64_t master_seed, int trial);
std::uint64_t trial_qn_seed(std::uint64_t master_seed, int trial);

}  // namespace pixelwpt
