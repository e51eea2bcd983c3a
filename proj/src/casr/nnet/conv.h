// casr/nnet/conv.h

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

#ifndef CASR_NNET_CONV_H_
#define CASR_NNET_CONV_H_

#include <string>

#include "casr/util/tensor.h"

namespace casr {

enum class ConvActivation { kRelu, kTanh, kIdentity };

// Valid 2D convolution over a (channels, time, freq) activation block.
// w: (c_out, c_in, kernel_h, kernel_w), b: (c_out); kernel_h spans time.
// Output dims: out_t = (t - kernel_h) / stride_h + 1, same for freq.
// Caller guarantees t >= kernel_h and f >= kernel_w.
Tensor conv2d_valid(const Tensor& in, const Tensor& w, const Tensor& b, int stride_h,
                    int stride_w);

// Gradients of the same convolution. din may be null for the first layer,
// whose input is data. dw/db are overwritten, not accumulated.
void conv2d_backward(const Tensor& in, const Tensor& w, const Tensor& dout, int stride_h,
                     int stride_w, Tensor* dw, Tensor* db, Tensor* din);

void apply_activation(Tensor* x, ConvActivation act);

// Chain rule through the activation using post-activation values only;
// valid for all three supported functions.
Tensor activation_backward(const Tensor& post, const Tensor& dpost, ConvActivation act);

const char* conv_activation_name(ConvActivation act);
ConvActivation conv_activation_from_name(const std::string& name);

}  // namespace casr

#endif  // CASR_NNET_CONV_H_
