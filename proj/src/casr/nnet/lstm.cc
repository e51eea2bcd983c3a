// casr/nnet/lstm.cc

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

#include "casr/nnet/lstm.h"

#include <cmath>

#include <Eigen/Dense>

namespace casr {

namespace {

using ERow = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapM = Eigen::Map<ERow>;
using MapC = Eigen::Map<const ERow>;
using MapV = Eigen::Map<Eigen::VectorXd>;
using MapVC = Eigen::Map<const Eigen::VectorXd>;

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

}  // namespace

Matrix lstm_forward(const Tensor& w_x, const Tensor& w_h, const Tensor& bias, const Matrix& x,
                    bool reverse, LstmDirCache* cache) {
  int64_t T = x.rows();
  int64_t H = w_h.dim(1);
  *cache = LstmDirCache{Matrix(T, H), Matrix(T, H), Matrix(T, H), Matrix(T, H),
                        Matrix(T, H), Matrix(T, H), Matrix(T, H)};
  if (T == 0) return Matrix(0, H);

  // Input projection for every step at once: Z = X Wx^T, (T, 4H).
  MapC xm(x.data(), T, x.cols());
  MapC wxm(w_x.data(), 4 * H, x.cols());
  ERow z = xm * wxm.transpose();
  MapVC bm(bias.data(), 4 * H);
  z.rowwise() += bm.transpose();

  MapC whm(w_h.data(), 4 * H, H);
  Eigen::VectorXd h_prev = Eigen::VectorXd::Zero(H);
  Eigen::VectorXd c_prev = Eigen::VectorXd::Zero(H);
  Eigen::VectorXd zt(4 * H);

  for (int64_t step = 0; step < T; ++step) {
    int64_t t = reverse ? T - 1 - step : step;
    zt = z.row(t).transpose() + whm * h_prev;
    for (int64_t j = 0; j < H; ++j) {
      double gi = sigmoid(zt(j));
      double gf = sigmoid(zt(H + j));
      double gg = std::tanh(zt(2 * H + j));
      double go = sigmoid(zt(3 * H + j));
      double c = gf * c_prev(j) + gi * gg;
      double tc = std::tanh(c);
      double h = go * tc;
      cache->gi(t, j) = gi;
      cache->gf(t, j) = gf;
      cache->gg(t, j) = gg;
      cache->go(t, j) = go;
      cache->c(t, j) = c;
      cache->tanh_c(t, j) = tc;
      cache->h(t, j) = h;
      c_prev(j) = c;
      h_prev(j) = h;
    }
  }
  return cache->h;
}

Matrix lstm_backward(const Tensor& w_x, const Tensor& w_h, const Matrix& x,
                     const LstmDirCache& cache, const Matrix& dh_out, bool reverse, Tensor* dw_x,
                     Tensor* dw_h, Tensor* db) {
  int64_t T = x.rows();
  int64_t W = x.cols();
  int64_t H = w_h.dim(1);
  *dw_x = Tensor({4 * H, W});
  *dw_h = Tensor({4 * H, H});
  *db = Tensor({4 * H});
  Matrix dx(T, W);
  if (T == 0) return dx;

  MapC whm(w_h.data(), 4 * H, H);
  MapM dwhm(dw_h->data(), 4 * H, H);
  MapV dbm(db->data(), 4 * H);

  // dz rows collected at the original time positions; the x-side weight
  // gradient then falls out as one product.
  ERow dz_all = ERow::Zero(T, 4 * H);
  Eigen::VectorXd dh_next = Eigen::VectorXd::Zero(H);  // from the later step
  Eigen::VectorXd dc_next = Eigen::VectorXd::Zero(H);
  Eigen::VectorXd dz(4 * H);

  for (int64_t step = static_cast<int64_t>(T) - 1; step >= 0; --step) {
    // Walk states in reverse scan order.
    int64_t t = reverse ? T - 1 - step : step;
    int64_t t_prev_step = reverse ? t + 1 : t - 1;  // earlier in scan order
    bool has_prev = t_prev_step >= 0 && t_prev_step < T;

    for (int64_t j = 0; j < H; ++j) {
      double dh = dh_out(t, j) + dh_next(j);
      double go = cache.go(t, j);
      double tc = cache.tanh_c(t, j);
      double dgo = dh * tc;
      double dc = dh * go * (1.0 - tc * tc) + dc_next(j);
      double gi = cache.gi(t, j);
      double gf = cache.gf(t, j);
      double gg = cache.gg(t, j);
      double c_prev = has_prev ? cache.c(t_prev_step, j) : 0.0;
      double dgi = dc * gg;
      double dgf = dc * c_prev;
      double dgg = dc * gi;
      dc_next(j) = dc * gf;
      dz(j) = dgi * gi * (1.0 - gi);
      dz(H + j) = dgf * gf * (1.0 - gf);
      dz(2 * H + j) = dgg * (1.0 - gg * gg);
      dz(3 * H + j) = dgo * go * (1.0 - go);
    }
    dz_all.row(t) = dz.transpose();
    dbm += dz;
    if (has_prev) {
      // Recurrent weight gradient pairs dz at t with h at the prior step.
      MapVC hp(cache.h.row(t_prev_step), H);
      dwhm.noalias() += dz * hp.transpose();
      dh_next.noalias() = whm.transpose() * dz;
    } else {
      dh_next.setZero();
    }
  }

  MapC xm(x.data(), T, W);
  MapM dwxm(dw_x->data(), 4 * H, W);
  dwxm.noalias() = dz_all.transpose() * xm;
  MapC wxm(w_x.data(), 4 * H, W);
  MapM dxm(dx.data(), T, W);
  dxm.noalias() = dz_all * wxm;
  return dx;
}

Matrix linear_forward(const Matrix& x, const Tensor& w, const Tensor& b) {
  int64_t T = x.rows();
  int64_t out = w.dim(0), in = w.dim(1);
  Matrix y(T, out);
  if (T == 0) return y;
  MapC xm(x.data(), T, in);
  MapC wm(w.data(), out, in);
  MapM ym(y.data(), T, out);
  ym.noalias() = xm * wm.transpose();
  MapVC bm(b.data(), out);
  ym.rowwise() += bm.transpose();
  return y;
}

Matrix linear_backward(const Matrix& x, const Tensor& w, const Matrix& dy, Tensor* dw,
                       Tensor* db) {
  int64_t T = x.rows();
  int64_t out = w.dim(0), in = w.dim(1);
  *dw = Tensor({out, in});
  *db = Tensor({out});
  Matrix dx(T, in);
  if (T == 0) return dx;
  MapC xm(x.data(), T, in);
  MapC dym(dy.data(), T, out);
  MapM dwm(dw->data(), out, in);
  dwm.noalias() = dym.transpose() * xm;
  MapV dbm(db->data(), out);
  dbm = dym.colwise().sum().transpose();
  MapC wm(w.data(), out, in);
  MapM dxm(dx.data(), T, in);
  dxm.noalias() = dym * wm;
  return dx;
}

}  // namespace casr
