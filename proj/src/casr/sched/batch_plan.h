// casr/sched/batch_plan.h

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

#ifndef CASR_SCHED_BATCH_PLAN_H_
#define CASR_SCHED_BATCH_PLAN_H_

#include <cstdint>
#include <random>
#include <vector>

#include "casr/sched/manifest.h"

namespace casr {

// Frame count an entry contributes to a padded batch, from its duration via
// the frontend formula.
int64_t manifest_frames(const ManifestEntry& entry);

struct BatchStats {
  int64_t size = 0;
  int64_t max_frames = 0;
  int64_t padded_cells = 0;  // size * max_frames - sum of frames
  int64_t useful_cells = 0;  // sum of frames
};

enum class BatchPolicy { kFixed, kVaried };

// Partition of the manifest into ordered batches of entry indices. Batches
// hold length-sorted consecutive entries; training shuffles batch order,
// never batch contents.
struct BatchPlan {
  std::vector<std::vector<size_t>> batches;
  std::vector<BatchStats> stats;
  BatchPolicy policy = BatchPolicy::kFixed;
  int base_batch = 1;
  int cap_ratio = 1;
};

// Ascending sort by frame count (ties by id), then consecutive groups of k;
// the final batch may be smaller.
BatchPlan plan_sorted_fixed(const Manifest& manifest, int k);

// Fixed-k grouping over a caller-supplied entry order; the randomized
// baseline the sorted plan is compared against.
BatchPlan plan_fixed_order(const Manifest& manifest, int k,
                           const std::vector<size_t>& order);

// Length-adaptive sizes: after the ascending sort, a bucket whose longest
// entry has L frames takes about base_k * L_max / L entries (rounded half
// down), clamped to [base_k, cap_ratio * base_k]. Every bucket then holds
// size * max_frames <= memory_budget, which defaults to 2 * base_k * L_max.
// A remainder shorter than base_k is folded into the neighbouring bucket
// (possible whenever cap_ratio >= 2) so no undersized bucket remains;
// cap_ratio = 1 degenerates to plan_sorted_fixed.
BatchPlan plan_varied(const Manifest& manifest, int base_k, int cap_ratio = 5,
                      int64_t memory_budget = 0);

struct PaddingReport {
  int64_t total_cells = 0;   // sum over batches of size * max_frames
  int64_t useful_cells = 0;  // sum of real frames
  int64_t padded_cells = 0;
  double waste_fraction = 0.0;  // padded / total
  // Sum over batches of max_frames: the sequential step count when every
  // batch runs its time axis once. Cell totals above give the exact padding
  // accounting; this is the throughput figure the policies are compared on.
  int64_t estimated_epoch_cost = 0;
};

PaddingReport padding_report(const BatchPlan& plan);

// Deterministic batch-order permutation for one epoch.
std::vector<size_t> shuffled_batch_order(size_t n_batches, std::mt19937_64& rng);

}  // namespace casr

#endif  // CASR_SCHED_BATCH_PLAN_H_
