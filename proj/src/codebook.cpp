// SPDX-License-Identifier: Apache-2.0
//
// pixelwpt: pixel-antenna MIMO wireless power transfer simulation library

#include "pixelwpt/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pixelwpt/rng.hpp"

namespace pixelwpt {

double coder_distance(const std::vector<std::uint8_t>& a,
                      const std::vector<std::uint8_t>& b) {
  if (a.size() != b.size())
    throw DimensionMismatch("coder_distance: length mismatch");
  int hamming = 0;
  for (std::size_t i = 0; i < a.size(); ++i) hamming += (a[i] != b[i]) ? 1 : 0;
  return std::sqrt(static_cast<double>(hamming));
}

CoderPool build_pool(const PipelineContext& ctx,
                     const std::vector<BeamspaceChannel>& training_channels,
                     const PoolOptions& opts) {
  if (training_channels.empty())
    throw Error("build_pool: no training channels");
  CoderPool pool;
  pool.q = ctx.antenna.q;
  for (std::size_t c = 0; c < training_channels.size(); ++c) {
    try {
      std::vector<std::uint8_t> bits;
      double objective = 0.0;
      if (opts.scheme == CodingScheme::RfcSvd) {
        const RfcResult r = optimize_rfc_binary(ctx, training_channels[c],
                                                opts.power_budget, opts.rfc);
        bits = pack_coders(r.b_t, r.b_r);
        objective = r.beamformers.gain;
      } else {
        const DccResult r = optimize_dcc_binary(ctx, training_channels[c],
                                                opts.power_budget, opts.dcc);
        bits = pack_coders(r.b_t, r.b_r);
        objective = r.power;
      }
      const int q = pool.q;
      for (int a = 0; a < opts.m + opts.n; ++a)
        pool.entries.emplace_back(bits.begin() + a * q,
                                  bits.begin() + (a + 1) * q);
      pool.objectives.push_back(objective);
    } catch (const Error& e) {
      throw Error("build_pool: channel " + std::to_string(c) + ": " +
                  e.what());
    }
  }
  return pool;
}

Assignment assign_coders(const CoderPool& pool, const Codebook& cb) {
  if (cb.codewords.empty()) throw EmptyCodebook("assign_coders: empty codebook");
  if (cb.q != pool.q)
    throw DimensionMismatch("assign_coders: pool and codebook Q differ");
  Assignment asg;
  asg.index.resize(pool.entries.size());
  for (std::size_t l = 0; l < pool.entries.size(); ++l) {
    int best = 0;
    double best_d = coder_distance(pool.entries[l], cb.codewords[0]);
    for (std::size_t d = 1; d < cb.codewords.size(); ++d) {
      const double dist = coder_distance(pool.entries[l], cb.codewords[d]);
      if (dist < best_d) {  // ties stay with the lowest index
        best_d = dist;
        best = static_cast<int>(d);
      }
    }
    asg.index[l] = best;
  }
  return asg;
}

double total_distortion(const CoderPool& pool, const Codebook& cb,
                        const Assignment& asg) {
  if (asg.index.size() != pool.entries.size())
    throw DimensionMismatch("total_distortion: assignment size mismatch");
  double sum = 0.0;
  for (std::size_t l = 0; l < pool.entries.size(); ++l)
    sum += coder_distance(pool.entries[l], cb.codewords[asg.index[l]]);
  return sum;
}

Codebook update_centers(const CoderPool& pool, const Assignment& asg,
                        const Codebook& current, const SeboConfig& sebo) {
  if (asg.index.size() != pool.entries.size())
    throw DimensionMismatch("update_centers: assignment size mismatch");
  const int q = pool.q;
  Codebook next = current;
  for (std::size_t d = 0; d < current.codewords.size(); ++d) {
    std::vector<const std::vector<std::uint8_t>*> members;
    for (std::size_t l = 0; l < pool.entries.size(); ++l)
      if (asg.index[l] == static_cast<int>(d))
        members.push_back(&pool.entries[l]);
    if (members.empty()) {
      // Re-seed with the pool entry farthest from this center.
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t l = 0; l < pool.entries.size(); ++l) {
        const double dist =
            coder_distance(pool.entries[l], current.codewords[d]);
        if (dist > far_d) {
          far_d = dist;
          far = l;
        }
      }
      next.codewords[d] = pool.entries[far];
      continue;
    }
    const SeboResult sr = sebo_maximize(
        [&](const std::vector<std::uint8_t>& c) {
          double dist = 0.0;
          for (const auto* mem : members) dist += coder_distance(*mem, c);
          return -dist;
        },
        q, current.codewords[d], sebo);
    next.codewords[d] = sr.bits;
  }
  return next;
}

Codebook train_codebook(const CoderPool& pool, int d,
                        const CodebookTrainOptions& opts,
                        TrainDiagnostics* diag) {
  if (d < 1) throw Error("train_codebook: codebook size must be >= 1");
  if (pool.entries.empty()) throw Error("train_codebook: empty pool");

  // Distinct entries in first-occurrence order.
  std::vector<std::vector<std::uint8_t>> distinct;
  for (const auto& e : pool.entries)
    if (std::find(distinct.begin(), distinct.end(), e) == distinct.end())
      distinct.push_back(e);

  // Farthest-point seeding over the distinct entries.
  Philox rng(opts.rng_seed, kStreamCodebook);
  Codebook cb;
  cb.q = pool.q;
  std::vector<std::size_t> chosen;
  chosen.push_back(rng.below(distinct.size()));
  while (static_cast<int>(chosen.size()) < d &&
         chosen.size() < distinct.size()) {
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t i = 0; i < distinct.size(); ++i) {
      if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
      double min_d = std::numeric_limits<double>::infinity();
      for (std::size_t c : chosen)
        min_d = std::min(min_d, coder_distance(distinct[i], distinct[c]));
      if (min_d > far_d) {
        far_d = min_d;
        far = i;
      }
    }
    chosen.push_back(far);
  }
  for (std::size_t c : chosen) cb.codewords.push_back(distinct[c]);
  int duplicates = 0;
  while (static_cast<int>(cb.codewords.size()) < d) {
    cb.codewords.push_back(distinct[duplicates % distinct.size()]);
    ++duplicates;
  }

  Assignment asg = assign_coders(pool, cb);
  double dist = total_distortion(pool, cb, asg);
  TrainDiagnostics local;
  TrainDiagnostics& dg = diag != nullptr ? *diag : local;
  dg = TrainDiagnostics{};
  dg.duplicate_codewords = duplicates;
  dg.distortion_per_iter.push_back(dist);

  for (int k = 1; k <= opts.max_iter; ++k) {
    SeboConfig sebo = opts.sebo;
    sebo.rng_seed = derive_seed(opts.rng_seed, k);
    const Codebook updated = update_centers(pool, asg, cb, sebo);
    const Assignment asg_new = assign_coders(pool, updated);
    const double dist_new = total_distortion(pool, updated, asg_new);
    if (dist_new > dist + 1e-9 * std::max(dist, 1.0))
      throw Error("train_codebook: distortion increased");
    cb = updated;
    asg = asg_new;
    dg.iterations = k;
    dg.distortion_per_iter.push_back(dist_new);
    if (dist - dist_new <= opts.tol * std::max(dist, 1.0)) {
      dist = dist_new;
      dg.converged = true;
      break;
    }
    dist = dist_new;
  }

  std::set<std::vector<std::uint8_t>> unique(cb.codewords.begin(),
                                             cb.codewords.end());
  dg.duplicate_codewords =
      static_cast<int>(cb.codewords.size() - unique.size());
  return cb;
}

Codebook random_codebook(int q, int d, std::uint64_t seed) {
  if (q < 1 || d < 1) throw Error("random_codebook: q and d must be >= 1");
  Philox rng(seed, kStreamCodebook);
  Codebook cb;
  cb.q = q;
  for (int i = 0; i < d; ++i) {
    std::vector<std::uint8_t> w(q);
    for (int j = 0; j < q; ++j) w[j] = static_cast<std::uint8_t>(rng.below(2));
    cb.codewords.push_back(std::move(w));
  }
  return cb;
}

DeployResult deploy_codebook(const PipelineContext& ctx,
                             const BeamspaceChannel& ch, const Codebook& cb,
                             CodingScheme scheme, double power_budget, int m,
                             int n, const DeployOptions& opts) {
  if (cb.codewords.empty()) throw EmptyCodebook("deploy_codebook: empty codebook");
  if (cb.q != ctx.antenna.q)
    throw DimensionMismatch("deploy_codebook: codebook Q differs from antenna");
  const int d = static_cast<int>(cb.codewords.size());
  const int antennas = m + n;
  SystemEvaluator ev(ctx, ch, m, n);

  std::vector<int> state(antennas, 0);
  if (!opts.init_indices.empty()) {
    if (static_cast<int>(opts.init_indices.size()) != antennas)
      throw DimensionMismatch("deploy_codebook: init_indices size mismatch");
    state = opts.init_indices;
    for (int idx : state)
      if (idx < 0 || idx >= d) throw Error("deploy_codebook: init index range");
  }

  std::vector<std::uint8_t> bits(static_cast<std::size_t>(antennas) * cb.q);
  auto write_bits = [&](const std::vector<int>& st) {
    for (int a = 0; a < antennas; ++a)
      for (int i = 0; i < cb.q; ++i)
        bits[a * cb.q + i] = cb.codewords[st[a]][i];
  };

  DeployResult res;
  auto objective = [&](const std::vector<int>& st) {
    write_bits(st);
    ++res.evaluations;
    const Eigen::MatrixXcd& h = ev.effective_from_bits(bits);
    if (scheme == CodingScheme::RfcSvd) {
      const double s = sigma_max(h);
      return 2.0 * power_budget * s * s;
    }
    const ScaResult sca = sca_transmit_beamforming(
        h, power_budget, ctx.rectenna, opts.sca_tol, opts.sca_cap_iters);
    return sca.objective;
  };

  double obj = objective(state);
  --res.evaluations;  // the starting point is not a sweep evaluation
  std::vector<int> cand = state;
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    bool changed = false;
    ++res.sweeps;
    for (int a = 0; a < antennas; ++a) {
      cand = state;
      int best_idx = state[a];
      double best_obj = -std::numeric_limits<double>::infinity();
      for (int idx = 0; idx < d; ++idx) {
        cand[a] = idx;
        const double f = objective(cand);
        if (f > best_obj) {
          best_obj = f;
          best_idx = idx;
        }
      }
      if (best_obj > obj) {
        state[a] = best_idx;
        obj = best_obj;
        changed = true;
      }
      res.objective_trace.push_back(obj);
    }
    if (!changed) break;
  }

  write_bits(state);
  auto [bt, br] = unpack_coders(bits, cb.q, m, n);
  res.b_t = std::move(bt);
  res.b_r = std::move(br);
  const Eigen::MatrixXcd h = ev.effective_from_bits(bits);
  if (scheme == CodingScheme::RfcSvd) {
    const RfcBeamformers bf = svd_beamformers(h, power_budget);
    res.p_t = bf.p_t;
    res.p_r = bf.p_r;
    res.power = power_rfc(h, bf.p_t, bf.p_r, ctx.rectenna);
  } else {
    const ScaResult sca = sca_transmit_beamforming(
        h, power_budget, ctx.rectenna, opts.sca_tol, opts.sca_cap_iters);
    res.p_t = sca.p_t;
    res.power = sca.objective;
  }
  return res;
}

std::string codebook_to_json_text(const Codebook& cb) {
  nlohmann::json j;
  j["q"] = cb.q;
  j["d"] = cb.codewords.size();
  nlohmann::json words = nlohmann::json::array();
  for (const auto& w : cb.codewords) {
    std::string s;
    for (std::uint8_t b : w) s.push_back(b ? '1' : '0');
    words.push_back(s);
  }
  j["codewords"] = std::move(words);
  return j.dump();
}

Codebook codebook_from_json_text(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    Codebook cb;
    cb.q = j.at("q").get<int>();
    const std::size_t d = j.at("d").get<std::size_t>();
    for (const auto& item : j.at("codewords")) {
      const std::string s = item.get<std::string>();
      if (static_cast<int>(s.size()) != cb.q)
        throw Error("codebook file: codeword length differs from q");
      std::vector<std::uint8_t> w(cb.q);
      for (int i = 0; i < cb.q; ++i) {
        if (s[i] != '0' && s[i] != '1')
          throw Error("codebook file: codewords must be 0/1 strings");
        w[i] = s[i] == '1' ? 1u : 0u;
      }
      cb.codewords.push_back(std::move(w));
    }
    if (cb.codewords.size() != d)
      throw Error("codebook file: d differs from codeword count");
    if (cb.codewords.empty()) throw EmptyCodebook("codebook file: no codewords");
    return cb;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("codebook file: ") + e.what());
  }
}

void save_codebook(const Codebook& cb, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open codebook file for writing: " + path);
  out << codebook_to_json_text(cb) << "\n";
}

Codebook load_codebook(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open codebook file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return codebook_from_json_text(ss.str());
}

}  // namespace pixelwpt
