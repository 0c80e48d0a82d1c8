/*
 * Copyright 2026 The DSO Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DSO_DETAIL_UPDATE_KERNEL_HPP_
#define DSO_DETAIL_UPDATE_KERNEL_HPP_

#include <cmath>
#include <cstddef>

#include "dso/objective.hpp"
#include "dso/serial.hpp"

namespace dso::detail {

// The single implementation of the coordinate update shared by the serial
// engine, the parallel workers and log replay. Every caller must go through
// apply() so that all three produce bit-identical results.
class UpdateKernel {
 public:
  UpdateKernel(const SaddleParams& params, const StepSchedule& schedule)
      : loss_(params.loss()),
        reg_(params.regularizer().kind),
        lambda_(params.lambda()),
        m_(static_cast<double>(params.data().num_examples())),
        epsilon_(schedule.epsilon),
        adaptive_(schedule.adaptive()),
        w_box_(params.regularizer().w_box()),
        alpha_box_(params.loss().alpha_box()),
        data_(&params.data()) {}

  bool adaptive() const noexcept { return adaptive_; }

  // acc_w / acc_alpha are the AdaGrad accumulators of the two coordinates and
  // are only touched when the schedule is adaptive.
  void apply(double& w, double& alpha, double* acc_w, double* acc_alpha, std::size_t i, std::size_t j,
             double x, double eta) const {
    const double w0 = w;
    const double a0 = alpha;
    const double col_nnz = static_cast<double>(data_->col_nnz(j));
    const double row_nnz = static_cast<double>(data_->row_nnz(i));
    const double gw = lambda_ * reg_grad(reg_, w0) / col_nnz - a0 * x / m_;
    const double ga = conjugate_grad(loss_, a0, data_->label(i)).value / (m_ * row_nnz) - w0 * x / m_;
    double eta_w = eta;
    double eta_a = eta;
    if (adaptive_) {
      *acc_w += gw * gw;
      *acc_alpha += ga * ga;
      eta_w = eta / std::sqrt(epsilon_ + *acc_w);
      eta_a = eta / std::sqrt(epsilon_ + *acc_alpha);
    }
    w = w_box_.clamp(w0 - eta_w * gw);
    alpha = alpha_box_.clamp(a0 + eta_a * ga);
  }

 private:
  LossModel loss_;
  RegularizerKind reg_;
  double lambda_;
  double m_;
  double epsilon_;
  bool adaptive_;
  Interval w_box_;
  Interval alpha_box_;
  const SparseDataset* data_;
};

}  // namespace dso::detail

#endif  // DSO_DETAIL_UPDATE_KERNEL_HPP_
