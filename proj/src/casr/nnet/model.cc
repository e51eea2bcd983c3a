// casr/nnet/model.cc

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

#include "casr/nnet/model.h"

#include <cmath>
#include <random>

#include "casr/ctc/ctc.h"
#include "casr/util/error.h"

namespace casr {

namespace {

double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string lstm_name(int layer, const char* dir, const char* part) {
  return "lstm" + std::to_string(layer) + "." + dir + "." + part;
}

}  // namespace

ModelConfig ModelConfig::stage1_full() {
  ModelConfig cfg;
  cfg.cnn_layers = {{11, 41, 2, 2, 32}, {11, 21, 1, 2, 32}};
  cfg.lstm_layers = 7;
  cfg.hidden_size = 1024;
  cfg.residual = true;
  cfg.alphabet_size = 29;
  cfg.input_features = 161;
  return cfg;
}

ModelConfig ModelConfig::stage2_full() {
  ModelConfig cfg = stage1_full();
  cfg.lstm_layers = 13;
  cfg.hidden_size = 512;
  return cfg;
}

ModelConfig ModelConfig::toy_stage1(int alphabet_size, int input_features) {
  ModelConfig cfg;
  cfg.cnn_layers = {{3, 5, 2, 2, 4}, {3, 3, 1, 2, 8}};
  cfg.lstm_layers = 2;
  cfg.hidden_size = 64;
  cfg.residual = true;
  cfg.alphabet_size = alphabet_size;
  cfg.input_features = input_features;
  return cfg;
}

ModelConfig ModelConfig::toy_stage2(int alphabet_size, int input_features) {
  ModelConfig cfg = toy_stage1(alphabet_size, input_features);
  cfg.lstm_layers = 3;
  cfg.hidden_size = 96;
  return cfg;
}

int ModelConfig::cnn_out_features() const {
  int64_t f = input_features;
  int channels = 1;
  for (const auto& layer : cnn_layers) {
    f = (f - layer.kernel_w) / layer.stride_w + 1;
    channels = layer.channels;
  }
  return static_cast<int>(f) * channels;
}

int64_t ModelConfig::cnn_time_reduction(int64_t frames) const {
  int64_t t = frames;
  for (const auto& layer : cnn_layers) {
    if (t < layer.kernel_h)
      throw InputTooShort("input of " + std::to_string(frames) +
                          " frames is shorter than the receptive field");
    t = (t - layer.kernel_h) / layer.stride_h + 1;
  }
  if (t < 1) throw InputTooShort("no frames survive the strides");
  return t;
}

int64_t ModelConfig::min_input_frames() const {
  int64_t t = 1;
  for (auto it = cnn_layers.rbegin(); it != cnn_layers.rend(); ++it)
    t = (t - 1) * it->stride_h + it->kernel_h;
  return t;
}

int ModelConfig::lstm_in_width(int layer) const {
  if (layer > 0) return hidden_size;
  return project_input ? hidden_size : cnn_out_features();
}

void ModelConfig::validate() const {
  if (lstm_layers < 1) throw ConfigError("at least one recurrent layer required");
  if (hidden_size < 1) throw ConfigError("hidden_size must be positive");
  if (alphabet_size < 2) throw ConfigError("alphabet_size must be at least 2");
  if (input_features < 1) throw ConfigError("input_features must be positive");
  if (residual_span < 1) throw ConfigError("residual_span must be positive");
  if (lstm_layers % residual_span != 0)
    throw ConfigError("lstm_layers must be a multiple of residual_span");
  int64_t f = input_features;
  for (const auto& layer : cnn_layers) {
    if (layer.kernel_h < 1 || layer.kernel_w < 1 || layer.stride_h < 1 || layer.stride_w < 1 ||
        layer.channels < 1)
      throw ConfigError("conv layer dimensions must be positive");
    if (f < layer.kernel_w)
      throw ConfigError("frequency axis shrinks below a conv kernel");
    f = (f - layer.kernel_w) / layer.stride_w + 1;
  }
  if (residual && !project_input && cnn_out_features() != hidden_size)
    throw ConfigError("shortcut needs the recurrent input width to equal hidden_size; " +
                      std::to_string(cnn_out_features()) + " vs " +
                      std::to_string(hidden_size));
}

nlohmann::json ModelConfig::to_json() const {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : cnn_layers)
    layers.push_back({{"kernel_h", l.kernel_h},
                      {"kernel_w", l.kernel_w},
                      {"stride_h", l.stride_h},
                      {"stride_w", l.stride_w},
                      {"channels", l.channels}});
  return nlohmann::json{{"cnn_layers", layers},
                        {"lstm_layers", lstm_layers},
                        {"hidden_size", hidden_size},
                        {"residual", residual},
                        {"residual_span", residual_span},
                        {"project_input", project_input},
                        {"alphabet_size", alphabet_size},
                        {"input_features", input_features},
                        {"conv_activation", conv_activation_name(conv_activation)}};
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
  ModelConfig cfg;
  cfg.cnn_layers.clear();
  if (j.contains("cnn_layers")) {
    for (const auto& l : j.at("cnn_layers")) {
      ConvLayerConfig c;
      c.kernel_h = l.at("kernel_h").get<int>();
      c.kernel_w = l.at("kernel_w").get<int>();
      c.stride_h = l.at("stride_h").get<int>();
      c.stride_w = l.at("stride_w").get<int>();
      c.channels = l.at("channels").get<int>();
      cfg.cnn_layers.push_back(c);
    }
  }
  if (j.contains("lstm_layers")) cfg.lstm_layers = j.at("lstm_layers").get<int>();
  if (j.contains("hidden_size")) cfg.hidden_size = j.at("hidden_size").get<int>();
  if (j.contains("residual")) cfg.residual = j.at("residual").get<bool>();
  if (j.contains("residual_span")) cfg.residual_span = j.at("residual_span").get<int>();
  if (j.contains("project_input")) cfg.project_input = j.at("project_input").get<bool>();
  if (j.contains("alphabet_size")) cfg.alphabet_size = j.at("alphabet_size").get<int>();
  if (j.contains("input_features")) cfg.input_features = j.at("input_features").get<int>();
  if (j.contains("conv_activation"))
    cfg.conv_activation = conv_activation_from_name(j.at("conv_activation").get<std::string>());
  cfg.validate();
  return cfg;
}

bool ModelConfig::operator==(const ModelConfig& o) const {
  return to_json() == o.to_json();
}

const Tensor& Checkpoint::param(const std::string& name) const {
  auto it = params.find(name);
  if (it == params.end()) throw ConfigError("missing parameter '" + name + "'");
  return it->second;
}

Tensor& Checkpoint::param(const std::string& name) {
  auto it = params.find(name);
  if (it == params.end()) throw ConfigError("missing parameter '" + name + "'");
  return it->second;
}

std::vector<std::pair<std::string, std::vector<int64_t>>> parameter_spec(
    const ModelConfig& cfg) {
  std::vector<std::pair<std::string, std::vector<int64_t>>> spec;
  int64_t c_in = 1;
  for (size_t i = 0; i < cfg.cnn_layers.size(); ++i) {
    const auto& l = cfg.cnn_layers[i];
    std::string base = "cnn" + std::to_string(i);
    spec.emplace_back(base + ".weight",
                      std::vector<int64_t>{l.channels, c_in, l.kernel_h, l.kernel_w});
    spec.emplace_back(base + ".bias", std::vector<int64_t>{l.channels});
    c_in = l.channels;
  }
  int64_t h = cfg.hidden_size;
  if (cfg.project_input) {
    spec.emplace_back("proj.weight", std::vector<int64_t>{h, cfg.cnn_out_features()});
    spec.emplace_back("proj.bias", std::vector<int64_t>{h});
  }
  for (int i = 0; i < cfg.lstm_layers; ++i) {
    int64_t w_in = cfg.lstm_in_width(i);
    for (const char* dir : {"fw", "bw"}) {
      spec.emplace_back(lstm_name(i, dir, "w_x"), std::vector<int64_t>{4 * h, w_in});
      spec.emplace_back(lstm_name(i, dir, "w_h"), std::vector<int64_t>{4 * h, h});
      spec.emplace_back(lstm_name(i, dir, "bias"), std::vector<int64_t>{4 * h});
    }
    std::string base = "lstm" + std::to_string(i) + ".combine";
    spec.emplace_back(base + ".weight", std::vector<int64_t>{h, h});
    spec.emplace_back(base + ".bias", std::vector<int64_t>{h});
  }
  spec.emplace_back("fc.weight", std::vector<int64_t>{cfg.alphabet_size, h});
  spec.emplace_back("fc.bias", std::vector<int64_t>{cfg.alphabet_size});
  return spec;
}

Checkpoint build_model(const ModelConfig& cfg, uint64_t seed) {
  cfg.validate();
  Checkpoint ckpt;
  ckpt.config = cfg;
  ckpt.rng_seed = seed;
  std::mt19937_64 rng(seed);
  for (const auto& [name, shape] : parameter_spec(cfg)) {
    Tensor t(shape);
    bool is_bias = name.size() > 4 && name.compare(name.size() - 4, 4, "bias") == 0;
    if (is_bias) {
      // Forget gates open at the start of training.
      if (name.find(".fw.") != std::string::npos || name.find(".bw.") != std::string::npos) {
        int64_t h = shape[0] / 4;
        for (int64_t j = h; j < 2 * h; ++j) t[j] = 1.0;
      }
    } else {
      int64_t fan_out, fan_in;
      if (shape.size() == 4) {
        fan_out = shape[0] * shape[2] * shape[3];
        fan_in = shape[1] * shape[2] * shape[3];
      } else {
        fan_out = shape[0];
        fan_in = shape[1];
      }
      double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
      for (int64_t i = 0; i < t.numel(); ++i)
        t[i] = (2.0 * uniform_unit(rng) - 1.0) * limit;
    }
    ckpt.params.emplace(name, std::move(t));
  }
  return ckpt;
}

Matrix model_forward(const Checkpoint& ckpt, const Matrix& features, ForwardCache* cache) {
  const ModelConfig& cfg = ckpt.config;
  if (features.cols() != cfg.input_features)
    throw ConfigError("feature width " + std::to_string(features.cols()) +
                      " does not match configured " + std::to_string(cfg.input_features));
  cfg.cnn_time_reduction(features.rows());  // throws InputTooShort early

  ForwardCache local;
  ForwardCache& cc = cache != nullptr ? *cache : local;
  cc = ForwardCache{};
  cc.input = features;

  // Into (1, T, F) then through the conv stack.
  Tensor act({1, features.rows(), features.cols()});
  for (int64_t t = 0; t < features.rows(); ++t)
    for (int64_t f = 0; f < features.cols(); ++f) act.at3(0, t, f) = features(t, f);

  for (size_t i = 0; i < cfg.cnn_layers.size(); ++i) {
    const auto& l = cfg.cnn_layers[i];
    cc.conv_in.push_back(act);
    Tensor out = conv2d_valid(act, ckpt.param("cnn" + std::to_string(i) + ".weight"),
                              ckpt.param("cnn" + std::to_string(i) + ".bias"), l.stride_h,
                              l.stride_w);
    apply_activation(&out, cfg.conv_activation);
    cc.conv_out.push_back(out);
    act = out;
  }

  // Flatten channels x freq per surviving frame.
  int64_t C = act.dim(0), Tp = act.dim(1), F = act.dim(2);
  Matrix flat(Tp, C * F);
  for (int64_t t = 0; t < Tp; ++t)
    for (int64_t c = 0; c < C; ++c)
      for (int64_t f = 0; f < F; ++f) flat(t, c * F + f) = act.at3(c, t, f);
  cc.flat = flat;

  Matrix x = cfg.project_input
                 ? linear_forward(flat, ckpt.param("proj.weight"), ckpt.param("proj.bias"))
                 : flat;

  std::vector<Matrix> block_in;  // shortcut source per block
  for (int i = 0; i < cfg.lstm_layers; ++i) {
    bool block_start = i % cfg.residual_span == 0;
    if (block_start) block_in.push_back(x);
    cc.seq_in.push_back(x);
    cc.fw.emplace_back();
    cc.bw.emplace_back();
    Matrix hf = lstm_forward(ckpt.param(lstm_name(i, "fw", "w_x")),
                             ckpt.param(lstm_name(i, "fw", "w_h")),
                             ckpt.param(lstm_name(i, "fw", "bias")), x, false, &cc.fw.back());
    Matrix hb = lstm_forward(ckpt.param(lstm_name(i, "bw", "w_x")),
                             ckpt.param(lstm_name(i, "bw", "w_h")),
                             ckpt.param(lstm_name(i, "bw", "bias")), x, true, &cc.bw.back());
    Matrix hs(hf.rows(), hf.cols());
    for (int64_t r = 0; r < hf.rows(); ++r)
      for (int64_t c = 0; c < hf.cols(); ++c) hs(r, c) = hf(r, c) + hb(r, c);
    cc.h_sum.push_back(hs);
    std::string base = "lstm" + std::to_string(i) + ".combine";
    Matrix comb = linear_forward(hs, ckpt.param(base + ".weight"), ckpt.param(base + ".bias"));
    cc.combined.push_back(comb);
    bool block_end = (i + 1) % cfg.residual_span == 0;
    if (cfg.residual && block_end) {
      const Matrix& src = block_in.back();
      for (int64_t r = 0; r < comb.rows(); ++r)
        for (int64_t c = 0; c < comb.cols(); ++c) comb(r, c) += src(r, c);
    }
    x = comb;
  }

  cc.last = x;
  cc.logits = linear_forward(x, ckpt.param("fc.weight"), ckpt.param("fc.bias"));
  cc.posts = softmax_rows(cc.logits);
  return cc.posts;
}

std::map<std::string, Tensor> model_backward(const Checkpoint& ckpt, const ForwardCache& cache,
                                             const Matrix& dlogits) {
  const ModelConfig& cfg = ckpt.config;
  std::map<std::string, Tensor> grads;

  Tensor dw, db;
  Matrix dx = linear_backward(cache.last, ckpt.param("fc.weight"), dlogits, &dw, &db);
  grads["fc.weight"] = std::move(dw);
  grads["fc.bias"] = std::move(db);

  // Gradient flowing into each block's input via the shortcut.
  Matrix block_skip;
  for (int i = cfg.lstm_layers - 1; i >= 0; --i) {
    bool block_end = (i + 1) % cfg.residual_span == 0;
    if (cfg.residual && block_end) block_skip = dx;

    std::string base = "lstm" + std::to_string(i) + ".combine";
    Matrix dh_sum =
        linear_backward(cache.h_sum[static_cast<size_t>(i)], ckpt.param(base + ".weight"), dx,
                        &dw, &db);
    grads[base + ".weight"] = std::move(dw);
    grads[base + ".bias"] = std::move(db);

    Tensor dwx, dwh, dbias;
    Matrix dx_fw = lstm_backward(ckpt.param(lstm_name(i, "fw", "w_x")),
                                 ckpt.param(lstm_name(i, "fw", "w_h")),
                                 cache.seq_in[static_cast<size_t>(i)],
                                 cache.fw[static_cast<size_t>(i)], dh_sum, false, &dwx, &dwh,
                                 &dbias);
    grads[lstm_name(i, "fw", "w_x")] = std::move(dwx);
    grads[lstm_name(i, "fw", "w_h")] = std::move(dwh);
    grads[lstm_name(i, "fw", "bias")] = std::move(dbias);
    Matrix dx_bw = lstm_backward(ckpt.param(lstm_name(i, "bw", "w_x")),
                                 ckpt.param(lstm_name(i, "bw", "w_h")),
                                 cache.seq_in[static_cast<size_t>(i)],
                                 cache.bw[static_cast<size_t>(i)], dh_sum, true, &dwx, &dwh,
                                 &dbias);
    grads[lstm_name(i, "bw", "w_x")] = std::move(dwx);
    grads[lstm_name(i, "bw", "w_h")] = std::move(dwh);
    grads[lstm_name(i, "bw", "bias")] = std::move(dbias);

    Matrix dprev(dx_fw.rows(), dx_fw.cols());
    for (int64_t r = 0; r < dprev.rows(); ++r)
      for (int64_t c = 0; c < dprev.cols(); ++c) dprev(r, c) = dx_fw(r, c) + dx_bw(r, c);

    bool block_start = i % cfg.residual_span == 0;
    if (cfg.residual && block_start) {
      for (int64_t r = 0; r < dprev.rows(); ++r)
        for (int64_t c = 0; c < dprev.cols(); ++c) dprev(r, c) += block_skip(r, c);
    }
    dx = dprev;
  }

  Matrix dflat = dx;
  if (cfg.project_input) {
    dflat = linear_backward(cache.flat, ckpt.param("proj.weight"), dx, &dw, &db);
    grads["proj.weight"] = std::move(dw);
    grads["proj.bias"] = std::move(db);
  }

  // Un-flatten to (C, T, F) and walk the conv stack backwards.
  if (!cfg.cnn_layers.empty()) {
    const Tensor& top = cache.conv_out.back();
    int64_t C = top.dim(0), Tp = top.dim(1), F = top.dim(2);
    Tensor dact({C, Tp, F});
    for (int64_t t = 0; t < Tp; ++t)
      for (int64_t c = 0; c < C; ++c)
        for (int64_t f = 0; f < F; ++f) dact.at3(c, t, f) = dflat(t, c * F + f);

    for (int i = static_cast<int>(cfg.cnn_layers.size()) - 1; i >= 0; --i) {
      const auto& l = cfg.cnn_layers[static_cast<size_t>(i)];
      Tensor dpre = activation_backward(cache.conv_out[static_cast<size_t>(i)], dact,
                                        cfg.conv_activation);
      Tensor dweight, dbias2, din;
      std::string base = "cnn" + std::to_string(i);
      conv2d_backward(cache.conv_in[static_cast<size_t>(i)], ckpt.param(base + ".weight"), dpre,
                      l.stride_h, l.stride_w, &dweight, &dbias2, i > 0 ? &din : nullptr);
      grads[base + ".weight"] = std::move(dweight);
      grads[base + ".bias"] = std::move(dbias2);
      if (i > 0) dact = std::move(din);
    }
  }
  return grads;
}

}  // namespace casr
