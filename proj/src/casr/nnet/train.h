// casr/nnet/train.h

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

#ifndef CASR_NNET_TRAIN_H_
#define CASR_NNET_TRAIN_H_

#include <cstdint>
#include <string>
#include <vector>

#include "casr/ctc/alphabet.h"
#include "casr/nnet/model.h"
#include "casr/sched/batch_plan.h"

namespace casr {

struct LrPhase {
  int epochs = 0;
  double lr = 0.0;
};

// Piecewise-constant learning rate with Adam. The stock shape: 20 epochs in
// three phases of strictly decreasing rate.
struct TrainSchedule {
  std::vector<LrPhase> phases{{10, 5e-4}, {5, 5e-5}, {5, 5e-6}};
  double beta1 = 0.99;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int early_stop_patience = 3;

  static TrainSchedule standard() { return TrainSchedule{}; }

  int total_epochs() const;
  double lr_for_epoch(int epoch) const;  // 1-based
  void validate() const;                 // throws ConfigError
};

// One training pair, index-aligned with the manifest the plan was built on.
struct TrainSample {
  std::string id;
  Matrix features;
  LabelSequence labels;
};

struct EpochMetrics {
  int epoch = 0;
  double lr = 0.0;
  double mean_loss = 0.0;
  double dev_loss = 0.0;  // NaN when no dev set
  int64_t skipped = 0;    // unalignable samples
};

struct TrainOptions {
  uint64_t seed = 0;
  int jobs = 1;  // per-sample gradient workers inside a batch
  // Stop after this many epochs even if the schedule has more; 0 keeps the
  // schedule's total.
  int max_epochs = 0;
  // Loss the early-stop patience watches: dev when present, else train.
  const std::vector<TrainSample>* dev = nullptr;
};

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<EpochMetrics> epochs;
  bool early_stopped = false;
};

// In-place Adam update from summed gradients; lr = 0 leaves every parameter
// bit-identical while still advancing the moments.
void adam_step(Checkpoint* ckpt, const std::map<std::string, Tensor>& grads, double lr,
               const TrainSchedule& sched);

// Mean CTC loss over a sample list; unalignable samples are skipped and
// counted. Used for dev evaluation.
double mean_ctc_loss(const Checkpoint& ckpt, const std::vector<TrainSample>& samples,
                     int64_t* skipped);

// Epoch loop: batch order reshuffled per epoch (seeded), per-batch mean CTC
// gradient, Adam step at the phase learning rate, optional early stop on
// stalled loss. Deterministic for a fixed seed and jobs = 1; any fixed jobs
// value is reproducible since per-sample gradients reduce in sample order.
TrainResult train_model(const Checkpoint& init, const std::vector<TrainSample>& samples,
                        const BatchPlan& plan, const TrainSchedule& sched,
                        const TrainOptions& opts);

}  // namespace casr

#endif  // CASR_NNET_TRAIN_H_
