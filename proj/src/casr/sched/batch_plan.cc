// casr/sched/batch_plan.cc

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

#include "casr/sched/batch_plan.h"

#include <algorithm>
#include <cmath>

#include "casr/audio/frontend.h"
#include "casr/util/error.h"

namespace casr {

namespace {

std::vector<int64_t> frames_of(const Manifest& manifest) {
  std::vector<int64_t> frames(manifest.size());
  for (size_t i = 0; i < manifest.size(); ++i) frames[i] = manifest_frames(manifest.entries[i]);
  return frames;
}

std::vector<size_t> sorted_order(const Manifest& manifest, const std::vector<int64_t>& frames) {
  std::vector<size_t> order(manifest.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (frames[a] != frames[b]) return frames[a] < frames[b];
    return manifest.entries[a].id < manifest.entries[b].id;
  });
  return order;
}

void push_batch(BatchPlan* plan, const std::vector<size_t>& order,
                const std::vector<int64_t>& frames, size_t begin, size_t end) {
  std::vector<size_t> batch(order.begin() + static_cast<long>(begin),
                            order.begin() + static_cast<long>(end));
  BatchStats st;
  st.size = static_cast<int64_t>(batch.size());
  for (size_t i = begin; i < end; ++i) {
    st.max_frames = std::max(st.max_frames, frames[order[i]]);
    st.useful_cells += frames[order[i]];
  }
  st.padded_cells = st.size * st.max_frames - st.useful_cells;
  plan->batches.push_back(std::move(batch));
  plan->stats.push_back(st);
}

// round(x) with exact halves going down: 2.5 -> 2. Undershooting keeps the
// memory bound safe.
int64_t round_half_down(double x) {
  return static_cast<int64_t>(std::ceil(x - 0.5));
}

}  // namespace

int64_t manifest_frames(const ManifestEntry& entry) {
  return frame_count(entry.duration_s, FrontendConfig{});
}

BatchPlan plan_fixed_order(const Manifest& manifest, int k, const std::vector<size_t>& order) {
  if (k < 1) throw ConfigError("batch size must be positive");
  if (order.size() != manifest.size())
    throw ConfigError("order must cover the manifest exactly");
  auto frames = frames_of(manifest);
  BatchPlan plan;
  plan.policy = BatchPolicy::kFixed;
  plan.base_batch = k;
  plan.cap_ratio = 1;
  for (size_t p = 0; p < order.size(); p += static_cast<size_t>(k))
    push_batch(&plan, order, frames, p, std::min(order.size(), p + static_cast<size_t>(k)));
  return plan;
}

BatchPlan plan_sorted_fixed(const Manifest& manifest, int k) {
  auto frames = frames_of(manifest);
  return plan_fixed_order(manifest, k, sorted_order(manifest, frames));
}

BatchPlan plan_varied(const Manifest& manifest, int base_k, int cap_ratio,
                      int64_t memory_budget) {
  if (base_k < 1) throw ConfigError("base batch size must be positive");
  if (cap_ratio < 1) throw ConfigError("cap ratio must be at least 1");
  if (cap_ratio == 1) {
    BatchPlan plan = plan_sorted_fixed(manifest, base_k);
    plan.policy = BatchPolicy::kVaried;
    plan.cap_ratio = 1;
    return plan;
  }

  auto frames = frames_of(manifest);
  auto order = sorted_order(manifest, frames);
  size_t n = order.size();
  BatchPlan plan;
  plan.policy = BatchPolicy::kVaried;
  plan.base_batch = base_k;
  plan.cap_ratio = cap_ratio;
  if (n == 0) return plan;

  int64_t f_max = frames[order.back()];
  int64_t min_budget = 2 * static_cast<int64_t>(base_k) * f_max;
  if (memory_budget <= 0) memory_budget = min_budget;
  // Construction bounds every bucket at size * max_frames <= 2 * base_k *
  // f_max (rounding slack plus the remainder merge), so that is the
  // smallest budget the planner can promise to honour.
  if (memory_budget < min_budget)
    throw ConfigError("memory budget below the feasible minimum for this manifest");
  int64_t cap = static_cast<int64_t>(cap_ratio) * base_k;

  auto size_for = [&](int64_t longest) {
    double ideal = static_cast<double>(base_k) * static_cast<double>(f_max) /
                   static_cast<double>(longest);
    return std::clamp(round_half_down(ideal), static_cast<int64_t>(base_k), cap);
  };

  size_t p = 0;
  while (p < n) {
    size_t remaining = n - p;
    // Two passes: size from the smallest bucket's longest entry, then from
    // the longest entry the first guess would actually cover. The second
    // pass can only shrink, which keeps size * max_frames under budget.
    size_t guess = std::min(remaining, static_cast<size_t>(base_k));
    size_t s1 = std::min(remaining, static_cast<size_t>(size_for(frames[order[p + guess - 1]])));
    size_t s = std::min(remaining, static_cast<size_t>(size_for(frames[order[p + s1 - 1]])));

    size_t left = remaining - s;
    if (left > 0 && left < static_cast<size_t>(base_k)) {
      if (remaining >= 2 * static_cast<size_t>(base_k)) {
        // Shrink so the remainder comes out at exactly base_k.
        s = remaining - static_cast<size_t>(base_k);
      } else {
        // Too few entries to split: one slightly-over bucket, at most
        // 2 * base_k - 1 <= cap_ratio * base_k entries.
        s = remaining;
      }
    }
    push_batch(&plan, order, frames, p, p + s);
    p += s;
  }
  return plan;
}

PaddingReport padding_report(const BatchPlan& plan) {
  PaddingReport report;
  for (const auto& st : plan.stats) {
    report.total_cells += st.size * st.max_frames;
    report.useful_cells += st.useful_cells;
    report.padded_cells += st.padded_cells;
    report.estimated_epoch_cost += st.max_frames;
  }
  if (report.total_cells > 0)
    report.waste_fraction =
        static_cast<double>(report.padded_cells) / static_cast<double>(report.total_cells);
  return report;
}

std::vector<size_t> shuffled_batch_order(size_t n_batches, std::mt19937_64& rng) {
  std::vector<size_t> order(n_batches);
  for (size_t i = 0; i < n_batches; ++i) order[i] = i;
  for (size_t i = n_batches; i > 1; --i) {
    size_t j = static_cast<size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

}  // namespace casr
