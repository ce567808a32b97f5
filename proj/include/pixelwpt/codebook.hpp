// SPDX-License-Identifier: Apache-2.0
//
// pixelwpt: pixel-antenna MIMO wireless power transfer simulation library

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pixelwpt/dcc.hpp"
#include "pixelwpt/rfc.hpp"

namespace pixelwpt {

/// Pool of binary coders harvested from per-channel joint optimizations:
/// all M transmit and N receive coder columns of every training channel,
/// L = (M+N) * N0 entries. `objectives` records each channel's optimizer
/// value for diagnostics.
struct CoderPool {
  int q = 0;
  std::vector<std::vector<std::uint8_t>> entries;
  std::vector<double> objectives;  // one per training channel
};

struct Codebook {
  int q = 0;
  std::vector<std::vector<std::uint8_t>> codewords;
};

/// Nearest-codeword assignment; index[l] is the codeword of pool entry l
/// (r_{l,d} = 1 iff index[l] == d, one codeword per entry).
struct Assignment {
  std::vector<int> index;
};

enum class CodingScheme { DccOpt, RfcSvd };

/// Unsquared Euclidean distance between binary vectors (sqrt of the Hamming
/// distance).
double coder_distance(const std::vector<std::uint8_t>& a,
                      const std::vector<std::uint8_t>& b);

struct PoolOptions {
  CodingScheme scheme = CodingScheme::RfcSvd;
  int m = 2;
  int n = 2;
  double power_budget = 1.0;
  DccOptions dcc;
  RfcOptions rfc;
};

/// Runs the scheme's joint binary optimizer on every training channel and
/// collects the resulting coder columns.
CoderPool build_pool(const PipelineContext& ctx,
                     const std::vector<BeamspaceChannel>& training_channels,
                     const PoolOptions& opts);

Assignment assign_coders(const CoderPool& pool, const Codebook& cb);

double total_distortion(const CoderPool& pool, const Codebook& cb,
                        const Assignment& asg);

/// Per-cluster center update by SEBO on the negated distortion, seeded at
/// the current center so the total distortion never increases. Empty
/// clusters are re-seeded with the pool entry farthest from their current
/// center.
Codebook update_centers(const CoderPool& pool, const Assignment& asg,
                        const Codebook& current, const SeboConfig& sebo);

struct CodebookTrainOptions {
  SeboConfig sebo;
  double tol = 1e-9;
  int max_iter = 100;
  std::uint64_t rng_seed = 0;
};

struct TrainDiagnostics {
  std::vector<double> distortion_per_iter;
  int duplicate_codewords = 0;
  int iterations = 0;
  bool converged = false;
};

/// Lloyd iteration between assign_coders and update_centers, seeded by
/// farthest-point sampling over the distinct pool entries.
Codebook train_codebook(const CoderPool& pool, int d,
                        const CodebookTrainOptions& opts,
                        TrainDiagnostics* diag = nullptr);

Codebook random_codebook(int q, int d, std::uint64_t seed);

struct DeployOptions {
  int max_sweeps = 50;
  int sca_cap_iters = 10;   // SCA iterations per DCC candidate evaluation
  double sca_tol = 1e-8;
  std::vector<int> init_indices;  // per-antenna start codewords; default 0
};

struct DeployResult {
  CoderMatrix b_t;
  CoderMatrix b_r;
  Eigen::VectorXcd p_t;
  Eigen::VectorXcd p_r;  // RFC scheme only
  double power = 0.0;
  int sweeps = 0;
  long evaluations = 0;
  std::vector<double> objective_trace;  // incumbent after each antenna update
};

/// Online block coordinate descent: cyclically re-picks each antenna's
/// codeword, evaluating all D candidates with the others fixed. Each sweep
/// costs exactly (M+N)*D objective evaluations; swaps are accepted only on
/// strict improvement, so the objective is non-decreasing.
DeployResult deploy_codebook(const PipelineContext& ctx,
                             const BeamspaceChannel& ch, const Codebook& cb,
                             CodingScheme scheme, double power_budget, int m,
                             int n, const DeployOptions& opts);

std::string codebook_to_json_text(const Codebook& cb);
Codebook codebook_from_json_text(const std::string& text);
void save_codebook(const Codebook& cb, const std::string& path);
Codebook load_codebook(const std::string& path);

}  // namespace pixelwpt
