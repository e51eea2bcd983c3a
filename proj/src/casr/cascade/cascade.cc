// casr/cascade/cascade.cc

// Copyright 2026  CASR Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "casr/cascade/cascade.h"

#include <cmath>
#include <unordered_set>
#include <utility>

#include "casr/ctc/ctc.h"
#include "casr/decoder/metrics.h"
#include "casr/sched/batch_plan.h"
#include "casr/sched/manifest.h"
#include "casr/util/error.h"

namespace casr {

std::vector<BeamHypothesis> decode_utterance(const Checkpoint& ckpt, const Matrix& features,
                                             const Alphabet& alphabet, const DecodeConfig& cfg,
                                             const ArpaModel* lm) {
  Matrix posts = model_forward(ckpt, features, nullptr);
  Matrix log_posts(posts.rows(), posts.cols());
  for (int64_t t = 0; t < posts.rows(); ++t)
    for (int64_t c = 0; c < posts.cols(); ++c) log_posts(t, c) = std::log(posts(t, c));
  return prefix_beam_search(log_posts, alphabet, cfg, lm);
}

std::vector<std::string> select_hard_samples(const std::vector<DecodeRecord>& decodes,
                                             double threshold, bool use_lm) {
  if (use_lm) throw ConfigError("selection over the training set is acoustic-only");
  std::vector<std::string> ids;
  for (const auto& d : decodes) {
    RouteDecision rd = route(d.top.log_p_total(), d.top.labels.size(), threshold);
    if (rd.decision == CascadeRoute::kCascade) ids.push_back(d.id);
  }
  return ids;
}

std::vector<std::string> select_wrong_samples(const std::vector<TranscriptPair>& pairs) {
  std::vector<std::string> ids;
  for (const auto& p : pairs)
    if (wer(p.hypothesis, p.reference) > 0.0) ids.push_back(p.id);
  return ids;
}

namespace {

// Batch planning keys off manifest durations; encode each sample's real frame
// count as a duration that maps back to exactly that count.
Manifest manifest_for(const std::vector<TrainSample>& samples) {
  Manifest m;
  for (const auto& s : samples) {
    ManifestEntry e;
    e.id = s.id;
    e.duration_s = (10.0 * static_cast<double>(s.features.rows()) + 25.0) / 1000.0;
    m.entries.push_back(std::move(e));
  }
  return m;
}

TrainResult train_stage(const Checkpoint& init, const std::vector<TrainSample>& samples,
                        const CascadeTrainConfig& cfg, uint64_t seed,
                        const std::vector<TrainSample>* dev) {
  BatchPlan plan = plan_varied(manifest_for(samples), cfg.base_batch, cfg.cap_ratio);
  TrainOptions opts;
  opts.seed = seed;
  opts.jobs = cfg.jobs;
  opts.max_epochs = cfg.max_epochs;
  opts.dev = dev;
  return train_model(init, samples, plan, cfg.schedule, opts);
}

}  // namespace

CascadeArtifacts run_cascade(const std::vector<TrainSample>& samples, const Alphabet& alphabet,
                             const CascadeTrainConfig& cfg,
                             const std::vector<TrainSample>* dev) {
  if (samples.empty()) throw ConfigError("cascade needs training samples");
  if (cfg.decode.lm_fusion) throw ConfigError("selection decode cannot fuse a language model");
  cfg.stage1.validate();
  cfg.stage2.validate();
  cfg.schedule.validate();

  CascadeArtifacts out;
  out.route_threshold = cfg.threshold;

  TrainResult r1 = train_stage(build_model(cfg.stage1, cfg.seed), samples, cfg, cfg.seed, dev);
  out.stage1 = std::move(r1.checkpoint);
  out.stage1_epochs = std::move(r1.epochs);

  std::vector<DecodeRecord> decodes;
  decodes.reserve(samples.size());
  for (const auto& s : samples) {
    auto hyps = decode_utterance(out.stage1, s.features, alphabet, cfg.decode, nullptr);
    decodes.push_back({s.id, hyps.front()});
  }
  for (const auto& d : decodes) {
    RouteDecision rd = route(d.top.log_p_total(), d.top.labels.size(), cfg.threshold);
    out.selection_log.push_back({d.id, rd.per_char_prob, rd.decision});
  }

  auto hard_ids = select_hard_samples(decodes, cfg.threshold, false);
  std::unordered_set<std::string> hard_set(hard_ids.begin(), hard_ids.end());
  std::vector<TrainSample> hard;
  for (const auto& s : samples)
    if (hard_set.count(s.id) != 0) hard.push_back(s);
  if (hard.empty()) throw CascadeDegenerate("no sample routed to the second stage");

  Checkpoint init2 =
      transfer_cnn_weights(out.stage1, build_model(cfg.stage2, cfg.seed + 1));
  out.cnn_transfer_hash = cnn_param_hash(init2);

  TrainResult r2 = train_stage(init2, hard, cfg, cfg.seed + 1, dev);
  out.stage2 = std::move(r2.checkpoint);
  out.stage2_epochs = std::move(r2.epochs);
  return out;
}

TwoStageResult two_stage_infer(const Matrix& features, const CascadeArtifacts& artifacts,
                               const Alphabet& alphabet, const ArpaModel& lm,
                               const DecodeConfig& cfg, double alpha) {
  const ArpaModel* fused = cfg.lm_fusion ? &lm : nullptr;
  auto hyps = decode_utterance(artifacts.stage1, features, alphabet, cfg, fused);

  TwoStageResult out;
  const BeamHypothesis& top = hyps.front();
  RouteDecision rd = route(top.log_p_total(), top.labels.size(), artifacts.route_threshold);
  out.route = rd.decision;
  out.normalized_score = rd.per_char_prob;
  if (rd.decision == CascadeRoute::kCascade) {
    hyps = decode_utterance(artifacts.stage2, features, alphabet, cfg, fused);
    out.stage2_evaluated = true;
  }

  std::vector<Candidate> cands;
  cands.reserve(hyps.size());
  for (const auto& h : hyps) cands.push_back({alphabet.decode(h.labels), h.log_p_total()});
  ScoredCandidate best = rescore_best(cands, lm, alpha);
  out.transcript = best.transcript;
  out.log_p_am = best.log_p_am;
  out.log10_p_lm = best.log10_p_lm;
  out.combined = best.combined;
  return out;
}

}  // namespace casr
