// casr/nnet/conv.cc

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

#include "casr/nnet/conv.h"

#include <cmath>

#include "casr/util/error.h"

namespace casr {

Tensor conv2d_valid(const Tensor& in, const Tensor& w, const Tensor& b, int stride_h,
                    int stride_w) {
  int64_t c_in = in.dim(0), t_in = in.dim(1), f_in = in.dim(2);
  int64_t c_out = w.dim(0), kh = w.dim(2), kw = w.dim(3);
  int64_t t_out = (t_in - kh) / stride_h + 1;
  int64_t f_out = (f_in - kw) / stride_w + 1;
  Tensor out({c_out, t_out, f_out});
  for (int64_t co = 0; co < c_out; ++co) {
    double bias = b[co];
    for (int64_t t = 0; t < t_out; ++t) {
      for (int64_t f = 0; f < f_out; ++f) {
        double acc = bias;
        int64_t t0 = t * stride_h, f0 = f * stride_w;
        for (int64_t ci = 0; ci < c_in; ++ci)
          for (int64_t dh = 0; dh < kh; ++dh)
            for (int64_t dw = 0; dw < kw; ++dw)
              acc += w.at4(co, ci, dh, dw) * in.at3(ci, t0 + dh, f0 + dw);
        out.at3(co, t, f) = acc;
      }
    }
  }
  return out;
}

void conv2d_backward(const Tensor& in, const Tensor& w, const Tensor& dout, int stride_h,
                     int stride_w, Tensor* dw, Tensor* db, Tensor* din) {
  int64_t c_in = in.dim(0);
  int64_t c_out = w.dim(0), kh = w.dim(2), kw = w.dim(3);
  int64_t t_out = dout.dim(1), f_out = dout.dim(2);
  *dw = Tensor(w.shape());
  *db = Tensor({c_out});
  if (din != nullptr) *din = Tensor(in.shape());
  for (int64_t co = 0; co < c_out; ++co) {
    for (int64_t t = 0; t < t_out; ++t) {
      for (int64_t f = 0; f < f_out; ++f) {
        double g = dout.at3(co, t, f);
        if (g == 0.0) continue;
        (*db)[co] += g;
        int64_t t0 = t * stride_h, f0 = f * stride_w;
        for (int64_t ci = 0; ci < c_in; ++ci) {
          for (int64_t dh = 0; dh < kh; ++dh) {
            for (int64_t dwi = 0; dwi < kw; ++dwi) {
              dw->at4(co, ci, dh, dwi) += g * in.at3(ci, t0 + dh, f0 + dwi);
              if (din != nullptr)
                din->at3(ci, t0 + dh, f0 + dwi) += g * w.at4(co, ci, dh, dwi);
            }
          }
        }
      }
    }
  }
}

void apply_activation(Tensor* x, ConvActivation act) {
  double* p = x->data();
  int64_t n = x->numel();
  switch (act) {
    case ConvActivation::kRelu:
      for (int64_t i = 0; i < n; ++i)
        if (p[i] < 0.0) p[i] = 0.0;
      break;
    case ConvActivation::kTanh:
      for (int64_t i = 0; i < n; ++i) p[i] = std::tanh(p[i]);
      break;
    case ConvActivation::kIdentity:
      break;
  }
}

Tensor activation_backward(const Tensor& post, const Tensor& dpost, ConvActivation act) {
  Tensor dpre(post.shape());
  int64_t n = post.numel();
  switch (act) {
    case ConvActivation::kRelu:
      for (int64_t i = 0; i < n; ++i) dpre[i] = post[i] > 0.0 ? dpost[i] : 0.0;
      break;
    case ConvActivation::kTanh:
      for (int64_t i = 0; i < n; ++i) dpre[i] = dpost[i] * (1.0 - post[i] * post[i]);
      break;
    case ConvActivation::kIdentity:
      for (int64_t i = 0; i < n; ++i) dpre[i] = dpost[i];
      break;
  }
  return dpre;
}

const char* conv_activation_name(ConvActivation act) {
  switch (act) {
    case ConvActivation::kRelu:
      return "relu";
    case ConvActivation::kTanh:
      return "tanh";
    case ConvActivation::kIdentity:
      return "identity";
  }
  return "relu";
}

ConvActivation conv_activation_from_name(const std::string& name) {
  if (name == "relu") return ConvActivation::kRelu;
  if (name == "tanh") return ConvActivation::kTanh;
  if (name == "identity") return ConvActivation::kIdentity;
  throw ConfigError("unknown activation '" + name + "'");
}

}  // namespace casr
