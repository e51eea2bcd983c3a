// casr/cascade/cascade.h

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

#ifndef CASR_CASCADE_CASCADE_H_
#define CASR_CASCADE_CASCADE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "casr/ctc/alphabet.h"
#include "casr/decoder/beam_search.h"
#include "casr/decoder/rescore.h"
#include "casr/lm/arpa.h"
#include "casr/nnet/checkpoint.h"
#include "casr/nnet/model.h"
#include "casr/nnet/train.h"
#include "casr/util/tensor.h"

namespace casr {

// Acoustic forward pass plus beam decode for one utterance. `lm` is only
// consulted when cfg.lm_fusion is set.
std::vector<BeamHypothesis> decode_utterance(const Checkpoint& ckpt, const Matrix& features,
                                             const Alphabet& alphabet, const DecodeConfig& cfg,
                                             const ArpaModel* lm = nullptr);

// One decoded utterance from the selection pass.
struct DecodeRecord {
  std::string id;
  BeamHypothesis top;
};

// Ids whose top hypothesis routes to the second stage under `threshold`.
// Selection over the training set is acoustic-only, so use_lm must be false;
// passing true throws ConfigError rather than silently ignoring the flag.
std::vector<std::string> select_hard_samples(const std::vector<DecodeRecord>& decodes,
                                             double threshold, bool use_lm);

// Reference-based alternative where transcripts exist: ids whose hypothesis
// has a nonzero word error rate against the reference. The score-threshold
// selector above is the default pipeline path.
struct TranscriptPair {
  std::string id;
  std::string hypothesis;
  std::string reference;
};
std::vector<std::string> select_wrong_samples(const std::vector<TranscriptPair>& pairs);

struct SelectionEntry {
  std::string id;
  double normalized_score = 0.0;  // per-character probability
  CascadeRoute routed_to = CascadeRoute::kLmRescore;
};

struct CascadeArtifacts {
  Checkpoint stage1;
  Checkpoint stage2;
  double route_threshold = 0.5;
  std::vector<SelectionEntry> selection_log;  // one entry per training sample
  // Hash of the convolutional parameters at hand-off; the second stage starts
  // from exactly these values.
  uint64_t cnn_transfer_hash = 0;
  std::vector<EpochMetrics> stage1_epochs;
  std::vector<EpochMetrics> stage2_epochs;
};

struct CascadeTrainConfig {
  ModelConfig stage1;
  ModelConfig stage2;
  TrainSchedule schedule = TrainSchedule::standard();
  // Selection decode over the training set; lm_fusion must stay off here.
  DecodeConfig decode;
  double threshold = 0.5;
  int base_batch = 4;
  int cap_ratio = 5;
  uint64_t seed = 0;
  int jobs = 1;
  int max_epochs = 0;  // 0 runs the full schedule
};

// Full pipeline: train stage one, re-decode the training set with it, keep
// the samples that route to the cascade, build stage two around stage one's
// convolutional weights, train it on that subset. Stage two derives its init
// and shuffle seed from cfg.seed + 1. Throws CascadeDegenerate when nothing
// routes to the second stage.
CascadeArtifacts run_cascade(const std::vector<TrainSample>& samples, const Alphabet& alphabet,
                             const CascadeTrainConfig& cfg,
                             const std::vector<TrainSample>* dev = nullptr);

struct TwoStageResult {
  std::string transcript;
  CascadeRoute route = CascadeRoute::kLmRescore;
  // Stage-one top-hypothesis statistics that drove the route.
  double normalized_score = 0.0;
  bool stage2_evaluated = false;
  // Winning candidate after rescoring of whichever hypothesis list survived.
  double log_p_am = 0.0;
  double log10_p_lm = 0.0;
  double combined = 0.0;
};

// Stage-one decode, threshold route, optional stage-two re-decode from the
// same features, then combined-score rescoring of the surviving list. With
// threshold >= 1 nothing can route, so output is identical to a plain
// stage-one decode plus rescoring.
TwoStageResult two_stage_infer(const Matrix& features, const CascadeArtifacts& artifacts,
                               const Alphabet& alphabet, const ArpaModel& lm,
                               const DecodeConfig& cfg, double alpha);

}  // namespace casr

#endif  // CASR_CASCADE_CASCADE_H_
