// casr/nnet/checkpoint.h

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

#ifndef CASR_NNET_CHECKPOINT_H_
#define CASR_NNET_CHECKPOINT_H_

#include <string>

#include "casr/nnet/model.h"

namespace casr {

// Binary model file, magic "CCKP" version 1: config as canonical JSON, then
// named float32 arrays with shape headers, then optional optimizer moments.
// Values are float32 on disk, so save -> load -> save is byte-stable while
// in-memory doubles are truncated once.
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

// Copies every cnn*.{weight,bias} array from `from` into a copy of `to`.
// The CNN sub-configs must be identical, including input_features; all
// other parameters and the optimizer state of `to` stay untouched.
Checkpoint transfer_cnn_weights(const Checkpoint& from, const Checkpoint& to);

// FNV-1a over the float32 encoding of all CNN parameters in name order.
// Stable across a save/load round trip.
uint64_t cnn_param_hash(const Checkpoint& ckpt);

}  // namespace casr

#endif  // CASR_NNET_CHECKPOINT_H_
