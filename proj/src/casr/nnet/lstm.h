// casr/nnet/lstm.h

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

#ifndef CASR_NNET_LSTM_H_
#define CASR_NNET_LSTM_H_

#include "casr/util/tensor.h"

namespace casr {

// One direction of an LSTM over a (T, in_width) sequence. Weights follow
// the gate order i, f, g, o stacked along the first axis:
//   w_x: (4H, in_width), w_h: (4H, H), bias: (4H).
// States start at zero; reverse=true scans t = T-1 .. 0 and writes h at the
// original time positions.
struct LstmDirCache {
  Matrix gi, gf, gg, go;  // post-nonlinearity gate values, each (T, H)
  Matrix c;               // cell state (T, H)
  Matrix tanh_c;          // (T, H)
  Matrix h;               // hidden output (T, H)
};

Matrix lstm_forward(const Tensor& w_x, const Tensor& w_h, const Tensor& bias, const Matrix& x,
                    bool reverse, LstmDirCache* cache);

// Backpropagation through time for the same direction. dh_out is the
// gradient arriving at every h_t from above; returns dx and overwrites the
// weight gradients.
Matrix lstm_backward(const Tensor& w_x, const Tensor& w_h, const Matrix& x,
                     const LstmDirCache& cache, const Matrix& dh_out, bool reverse, Tensor* dw_x,
                     Tensor* dw_h, Tensor* db);

// y = x W^T + b for (T, in) x, (out, in) w, (out) b.
Matrix linear_forward(const Matrix& x, const Tensor& w, const Tensor& b);

// Gradients of linear_forward; returns dx.
Matrix linear_backward(const Matrix& x, const Tensor& w, const Matrix& dy, Tensor* dw,
                       Tensor* db);

}  // namespace casr

#endif  // CASR_NNET_LSTM_H_
