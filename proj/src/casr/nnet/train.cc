// casr/nnet/train.cc

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

#include "casr/nnet/train.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "casr/ctc/ctc.h"
#include "casr/util/error.h"

namespace casr {

int TrainSchedule::total_epochs() const {
  int total = 0;
  for (const auto& p : phases) total += p.epochs;
  return total;
}

double TrainSchedule::lr_for_epoch(int epoch) const {
  int upto = 0;
  for (const auto& p : phases) {
    upto += p.epochs;
    if (epoch <= upto) return p.lr;
  }
  return phases.empty() ? 0.0 : phases.back().lr;
}

void TrainSchedule::validate() const {
  if (phases.empty()) throw ConfigError("schedule needs at least one phase");
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& p : phases) {
    if (p.epochs < 1) throw ConfigError("each phase needs at least one epoch");
    if (p.lr < 0.0) throw ConfigError("learning rate cannot be negative");
    if (p.lr >= prev) throw ConfigError("phase learning rates must strictly decrease");
    prev = p.lr;
  }
  if (beta1 < 0.0 || beta1 >= 1.0 || beta2 < 0.0 || beta2 >= 1.0)
    throw ConfigError("moment decay rates must lie in [0, 1)");
  if (epsilon <= 0.0) throw ConfigError("epsilon must be positive");
  if (early_stop_patience < 1) throw ConfigError("patience must be at least 1");
}

void adam_step(Checkpoint* ckpt, const std::map<std::string, Tensor>& grads, double lr,
               const TrainSchedule& sched) {
  if (ckpt->adam_m.empty()) {
    for (const auto& [name, p] : ckpt->params) {
      ckpt->adam_m.emplace(name, Tensor(p.shape()));
      ckpt->adam_v.emplace(name, Tensor(p.shape()));
    }
  }
  ckpt->adam_t += 1;
  double bc1 = 1.0 - std::pow(sched.beta1, static_cast<double>(ckpt->adam_t));
  double bc2 = 1.0 - std::pow(sched.beta2, static_cast<double>(ckpt->adam_t));
  for (auto& [name, p] : ckpt->params) {
    auto git = grads.find(name);
    if (git == grads.end()) throw ConfigError("gradient missing for '" + name + "'");
    const Tensor& g = git->second;
    Tensor& m = ckpt->adam_m.at(name);
    Tensor& v = ckpt->adam_v.at(name);
    for (int64_t i = 0; i < p.numel(); ++i) {
      m[i] = sched.beta1 * m[i] + (1.0 - sched.beta1) * g[i];
      v[i] = sched.beta2 * v[i] + (1.0 - sched.beta2) * g[i] * g[i];
      double update = lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + sched.epsilon);
      p[i] -= update;
    }
  }
}

namespace {

struct SampleGrad {
  std::map<std::string, Tensor> grads;
  double loss = 0.0;
  bool skipped = false;
};

SampleGrad sample_gradient(const Checkpoint& ckpt, const TrainSample& sample) {
  SampleGrad out;
  ForwardCache cache;
  model_forward(ckpt, sample.features, &cache);
  int blank = static_cast<int>(cache.logits.cols()) - 1;
  try {
    CtcResult ctc = ctc_loss_and_grad(cache.logits, sample.labels, blank);
    out.loss = ctc.loss;
    out.grads = model_backward(ckpt, cache, ctc.grad);
  } catch (const ImpossibleAlignment&) {
    out.skipped = true;
  }
  return out;
}

void accumulate(std::map<std::string, Tensor>* total, const std::map<std::string, Tensor>& part,
                double scale) {
  for (const auto& [name, g] : part) {
    auto it = total->find(name);
    if (it == total->end()) {
      Tensor t(g.shape());
      for (int64_t i = 0; i < g.numel(); ++i) t[i] = g[i] * scale;
      total->emplace(name, std::move(t));
    } else {
      Tensor& t = it->second;
      for (int64_t i = 0; i < g.numel(); ++i) t[i] += g[i] * scale;
    }
  }
}

}  // namespace

double mean_ctc_loss(const Checkpoint& ckpt, const std::vector<TrainSample>& samples,
                     int64_t* skipped) {
  double total = 0.0;
  int64_t counted = 0;
  for (const auto& s : samples) {
    Matrix posts = model_forward(ckpt, s.features, nullptr);
    int blank = static_cast<int>(posts.cols()) - 1;
    double lp = ctc_log_prob(posts, s.labels, blank);
    if (!std::isfinite(lp)) {
      if (skipped != nullptr) ++(*skipped);
      continue;
    }
    total += -lp;
    ++counted;
  }
  return counted == 0 ? std::numeric_limits<double>::quiet_NaN()
                      : total / static_cast<double>(counted);
}

TrainResult train_model(const Checkpoint& init, const std::vector<TrainSample>& samples,
                        const BatchPlan& plan, const TrainSchedule& sched,
                        const TrainOptions& opts) {
  sched.validate();
  for (const auto& batch : plan.batches)
    for (size_t idx : batch)
      if (idx >= samples.size()) throw ConfigError("plan references a missing sample");

  TrainResult result;
  result.checkpoint = init;
  Checkpoint& ckpt = result.checkpoint;
  std::mt19937_64 rng(opts.seed);

  int total_epochs = sched.total_epochs();
  if (opts.max_epochs > 0) total_epochs = std::min(total_epochs, opts.max_epochs);
  double best_watched = std::numeric_limits<double>::infinity();
  int stalled = 0;

  for (int epoch = 1; epoch <= total_epochs; ++epoch) {
    double lr = sched.lr_for_epoch(epoch);
    auto order = shuffled_batch_order(plan.batches.size(), rng);
    double loss_sum = 0.0;
    int64_t loss_count = 0;
    int64_t skipped = 0;

    for (size_t bi : order) {
      const auto& batch = plan.batches[bi];
      std::vector<SampleGrad> per_sample(batch.size());
      int jobs = std::max(1, opts.jobs);
      if (jobs == 1 || batch.size() <= 1) {
        for (size_t i = 0; i < batch.size(); ++i)
          per_sample[i] = sample_gradient(ckpt, samples[batch[i]]);
      } else {
        std::vector<std::thread> workers;
        for (int w = 0; w < jobs; ++w) {
          workers.emplace_back([&, w]() {
            for (size_t i = static_cast<size_t>(w); i < batch.size();
                 i += static_cast<size_t>(jobs))
              per_sample[i] = sample_gradient(ckpt, samples[batch[i]]);
          });
        }
        for (auto& t : workers) t.join();
      }

      int64_t contributing = 0;
      for (const auto& sg : per_sample)
        if (!sg.skipped) ++contributing;
      skipped += static_cast<int64_t>(per_sample.size()) - contributing;
      if (contributing == 0) continue;

      // Reduce in sample order so the result is independent of thread
      // interleaving.
      std::map<std::string, Tensor> grads;
      double scale = 1.0 / static_cast<double>(contributing);
      for (const auto& sg : per_sample) {
        if (sg.skipped) continue;
        accumulate(&grads, sg.grads, scale);
        loss_sum += sg.loss;
        ++loss_count;
      }
      adam_step(&ckpt, grads, lr, sched);
    }

    EpochMetrics m;
    m.epoch = epoch;
    m.lr = lr;
    m.skipped = skipped;
    m.mean_loss = loss_count == 0 ? std::numeric_limits<double>::quiet_NaN()
                                  : loss_sum / static_cast<double>(loss_count);
    m.dev_loss = opts.dev != nullptr ? mean_ctc_loss(ckpt, *opts.dev, nullptr)
                                     : std::numeric_limits<double>::quiet_NaN();
    result.epochs.push_back(m);
    ckpt.epoch = epoch;

    double watched = opts.dev != nullptr ? m.dev_loss : m.mean_loss;
    if (std::isfinite(watched) && watched < best_watched) {
      best_watched = watched;
      stalled = 0;
    } else {
      ++stalled;
      if (stalled >= sched.early_stop_patience) {
        result.early_stopped = true;
        break;
      }
    }
  }
  return result;
}

}  // namespace casr
