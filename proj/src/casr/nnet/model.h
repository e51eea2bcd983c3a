// casr/nnet/model.h

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

#ifndef CASR_NNET_MODEL_H_
#define CASR_NNET_MODEL_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "casr/nnet/conv.h"
#include "casr/nnet/lstm.h"
#include "casr/util/tensor.h"

namespace casr {

struct ConvLayerConfig {
  int kernel_h = 3;  // time axis
  int kernel_w = 3;  // frequency axis
  int stride_h = 1;
  int stride_w = 1;
  int channels = 1;
};

// Acoustic model: CNN front layers over the (time, freq) plane, a stack of
// bidirectional LSTM layers with additive shortcuts, one linear layer, and
// a per-frame softmax.
//
// Widths: the CNN output is flattened per time step to cnn_out_features().
// With project_input (default) a linear layer maps that to hidden_size and
// every LSTM layer runs at width hidden_size. Without it the first LSTM
// layer consumes the CNN width directly, which is only shape-legal for the
// shortcut when that width equals hidden_size.
struct ModelConfig {
  std::vector<ConvLayerConfig> cnn_layers;
  int lstm_layers = 7;
  int hidden_size = 1024;
  bool residual = true;
  int residual_span = 1;  // LSTM layers wrapped by one shortcut
  bool project_input = true;
  int alphabet_size = 29;
  int input_features = 161;
  ConvActivation conv_activation = ConvActivation::kRelu;

  // Stock configurations. The full-scale ones are constructible but far too
  // slow for the test suite, which runs the toy pair.
  static ModelConfig stage1_full();
  static ModelConfig stage2_full();
  static ModelConfig toy_stage1(int alphabet_size, int input_features);
  static ModelConfig toy_stage2(int alphabet_size, int input_features);

  // Per-frame feature width after the CNN (last layer channels x freq bins).
  int cnn_out_features() const;
  // Frame count surviving the CNN strides; throws InputTooShort.
  int64_t cnn_time_reduction(int64_t frames) const;
  int64_t min_input_frames() const;
  // Width consumed by LSTM layer i.
  int lstm_in_width(int layer) const;

  void validate() const;  // throws ConfigError
  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json& j);

  bool operator==(const ModelConfig& o) const;
};

// Model state: configuration plus named parameters, with optimizer moments
// when mid-training. The parameter key set and every shape are functions of
// the config alone.
struct Checkpoint {
  ModelConfig config;
  std::map<std::string, Tensor> params;
  std::map<std::string, Tensor> adam_m;  // empty until the first update
  std::map<std::string, Tensor> adam_v;
  int64_t adam_t = 0;
  int64_t epoch = 0;
  uint64_t rng_seed = 0;

  const Tensor& param(const std::string& name) const;
  Tensor& param(const std::string& name);
};

// Parameter names in construction order, with shapes, for the given config.
std::vector<std::pair<std::string, std::vector<int64_t>>> parameter_spec(
    const ModelConfig& cfg);

// Uniform fan-scaled initialization, deterministic per seed. Forget-gate
// bias slices start at 1, every other bias at 0.
Checkpoint build_model(const ModelConfig& cfg, uint64_t seed);

// Everything backward needs, captured during forward.
struct ForwardCache {
  Matrix input;                        // (T, features)
  std::vector<Tensor> conv_in;         // per conv layer, (C, T, F)
  std::vector<Tensor> conv_out;        // post-activation
  Matrix flat;                         // (T', cnn_out_features)
  std::vector<Matrix> seq_in;          // input to each LSTM layer
  std::vector<LstmDirCache> fw, bw;    // per layer
  std::vector<Matrix> h_sum;           // fw.h + bw.h per layer
  std::vector<Matrix> combined;        // combine() output per layer
  Matrix last;                         // input to the output linear layer
  Matrix logits;
  Matrix posts;
};

// Posteriors (T', alphabet_size), each row summing to 1. cache may be null for
// inference-only calls.
Matrix model_forward(const Checkpoint& ckpt, const Matrix& features, ForwardCache* cache);

// Gradients for every parameter given d(loss)/d(logits), e.g. the CTC
// gradient. Keys and shapes mirror ckpt.params.
std::map<std::string, Tensor> model_backward(const Checkpoint& ckpt, const ForwardCache& cache,
                                             const Matrix& dlogits);

}  // namespace casr

#endif  // CASR_NNET_MODEL_H_
