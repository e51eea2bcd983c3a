// casr/nnet/checkpoint.cc

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

#include "casr/nnet/checkpoint.h"

#include <cstring>
#include <fstream>

#include "casr/util/error.h"
#include "casr/util/io.h"

namespace casr {

namespace {

constexpr char kMagic[4] = {'C', 'C', 'K', 'P'};
constexpr uint32_t kVersion = 1;

void write_named_tensors(std::ostream& os, const std::map<std::string, Tensor>& tensors) {
  write_u32(os, static_cast<uint32_t>(tensors.size()));
  for (const auto& [name, t] : tensors) {
    write_string(os, name);
    write_u32(os, static_cast<uint32_t>(t.ndim()));
    for (int d = 0; d < t.ndim(); ++d) write_u64(os, static_cast<uint64_t>(t.dim(d)));
    write_f32_array(os, t.data(), static_cast<size_t>(t.numel()));
  }
}

std::map<std::string, Tensor> read_named_tensors(std::istream& is) {
  std::map<std::string, Tensor> out;
  uint32_t n = read_u32(is);
  for (uint32_t i = 0; i < n; ++i) {
    std::string name = read_string(is);
    uint32_t ndim = read_u32(is);
    std::vector<int64_t> shape(ndim);
    for (uint32_t d = 0; d < ndim; ++d) shape[d] = static_cast<int64_t>(read_u64(is));
    Tensor t(shape);
    read_f32_array(is, t.data(), static_cast<size_t>(t.numel()));
    out.emplace(std::move(name), std::move(t));
  }
  return out;
}

bool is_cnn_param(const std::string& name) {
  return name.rfind("cnn", 0) == 0;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ParseError("cannot open '" + path + "' for writing", 0);
  os.write(kMagic, 4);
  write_u32(os, kVersion);
  write_string(os, ckpt.config.to_json().dump());
  write_u64(os, static_cast<uint64_t>(ckpt.epoch));
  write_u64(os, ckpt.rng_seed);
  write_u64(os, static_cast<uint64_t>(ckpt.adam_t));
  write_named_tensors(os, ckpt.params);
  bool has_opt = !ckpt.adam_m.empty();
  write_u32(os, has_opt ? 1 : 0);
  if (has_opt) {
    write_named_tensors(os, ckpt.adam_m);
    write_named_tensors(os, ckpt.adam_v);
  }
  if (!os) throw ParseError("short write to '" + path + "'", 0);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("cannot open '" + path + "'", 0);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != std::string(kMagic, 4))
    throw ParseError("'" + path + "' is not a model file", 0);
  uint32_t version = read_u32(is);
  if (version != kVersion)
    throw ParseError("unsupported model file version " + std::to_string(version), 0);
  Checkpoint ckpt;
  ckpt.config = ModelConfig::from_json(nlohmann::json::parse(read_string(is)));
  ckpt.epoch = static_cast<int64_t>(read_u64(is));
  ckpt.rng_seed = read_u64(is);
  ckpt.adam_t = static_cast<int64_t>(read_u64(is));
  ckpt.params = read_named_tensors(is);
  uint32_t has_opt = read_u32(is);
  if (has_opt != 0) {
    ckpt.adam_m = read_named_tensors(is);
    ckpt.adam_v = read_named_tensors(is);
  }

  // Shapes must match what the config implies.
  auto spec = parameter_spec(ckpt.config);
  if (spec.size() != ckpt.params.size())
    throw ParseError("parameter count does not match the stored config", 0);
  for (const auto& [name, shape] : spec) {
    auto it = ckpt.params.find(name);
    if (it == ckpt.params.end()) throw ParseError("missing parameter '" + name + "'", 0);
    if (it->second.shape() != shape)
      throw ParseError("parameter '" + name + "' has the wrong shape", 0);
  }
  return ckpt;
}

Checkpoint transfer_cnn_weights(const Checkpoint& from, const Checkpoint& to) {
  const auto& a = from.config;
  const auto& b = to.config;
  bool same = a.input_features == b.input_features &&
              a.cnn_layers.size() == b.cnn_layers.size() &&
              a.conv_activation == b.conv_activation;
  if (same) {
    for (size_t i = 0; i < a.cnn_layers.size(); ++i) {
      const auto& x = a.cnn_layers[i];
      const auto& y = b.cnn_layers[i];
      same = same && x.kernel_h == y.kernel_h && x.kernel_w == y.kernel_w &&
             x.stride_h == y.stride_h && x.stride_w == y.stride_w && x.channels == y.channels;
    }
  }
  if (!same) throw ConfigError("cannot transfer between differing front-end layer configs");
  Checkpoint out = to;
  for (const auto& [name, t] : from.params)
    if (is_cnn_param(name)) out.params[name] = t;
  return out;
}

uint64_t cnn_param_hash(const Checkpoint& ckpt) {
  std::string bytes;
  for (const auto& [name, t] : ckpt.params) {
    if (!is_cnn_param(name)) continue;
    bytes += name;
    bytes += '\0';
    for (int64_t i = 0; i < t.numel(); ++i) {
      float f = static_cast<float>(t[i]);
      char buf[sizeof(float)];
      std::memcpy(buf, &f, sizeof(float));
      bytes.append(buf, sizeof(float));
    }
  }
  return fnv1a64(bytes);
}

}  // namespace casr
