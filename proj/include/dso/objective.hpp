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

#ifndef DSO_OBJECTIVE_HPP_
#define DSO_OBJECTIVE_HPP_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dso/dataset.hpp"

namespace dso {

enum class LossKind { kHinge, kLogistic, kSquared };
enum class RegularizerKind { kL2, kL1 };

std::string_view to_string(LossKind kind);
std::string_view to_string(RegularizerKind kind);
LossKind parse_loss_kind(std::string_view name);
RegularizerKind parse_regularizer_kind(std::string_view name);

// Closed interval [lo, hi].
struct Interval {
  double lo;
  double hi;

  bool contains(double v) const noexcept { return v >= lo && v <= hi; }
  double clamp(double v) const noexcept { return std::min(std::max(v, lo), hi); }
};

// Logistic duals live in (0, 1); they are kept this far from either end.
inline constexpr double kLogisticAlphaMargin = 1e-14;
inline constexpr double kDefaultAlphaBound = 10.0;

struct LossModel {
  LossKind kind = LossKind::kHinge;
  // B_alpha: half-width of the squared-loss dual box. Ignored otherwise.
  double alpha_bound = kDefaultAlphaBound;

  Interval alpha_box() const;
};

struct RegularizerModel {
  RegularizerKind kind = RegularizerKind::kL2;
  // W: every w_j is kept in [-W, W].
  double w_bound = 1.0;

  Interval w_box() const { return {-w_bound, w_bound}; }
};

// All loss functions are in margin form: `target` only matters for the
// squared loss, where it is y_i.
double loss_value(const LossModel& loss, double u, double target);

/// Subgradient of the loss in u. Hinge uses 0 at the kink u = 1.
double loss_derivative(const LossModel& loss, double u, double target);

/// l*(-alpha) in closed form. Throws kDomain outside alpha_box().
double conjugate_value(const LossModel& loss, double alpha, double target);

struct ConjugateGradient {
  double value;
  // Set on the boundary of the box, where only a one-sided derivative exists.
  bool one_sided;
};

/// The derivative of l* evaluated at -alpha (the term driving the ascent step).
/// Equals minus the derivative of conjugate_value() with respect to alpha.
ConjugateGradient conjugate_grad(const LossModel& loss, double alpha, double target);

double reg_value(RegularizerKind kind, double w);
/// l1 returns sign(w) with 0 at exactly 0.
double reg_grad(RegularizerKind kind, double w);

/// Default clipping radius for w: 1/sqrt(lambda) for hinge + l2,
/// sqrt(log 2 / lambda) for logistic + l2. Other pairings use the bound implied
/// by lambda * sum_j phi(w*_j) <= P(0).
double default_w_bound(const SparseDataset& data, const LossModel& loss, RegularizerKind reg,
                       double lambda);

/// Everything needed to evaluate f(w, alpha) on one dataset. Holds a reference
/// to the dataset, which must outlive it.
class SaddleParams {
 public:
  struct Options {
    std::optional<double> w_bound;
    // lambda = 0 is accepted only for the SGD baseline.
    bool allow_zero_lambda = false;
  };

  SaddleParams(const SparseDataset& data, LossModel loss, RegularizerKind reg, double lambda)
      : SaddleParams(data, loss, reg, lambda, Options{}) {}
  SaddleParams(const SparseDataset& data, LossModel loss, RegularizerKind reg, double lambda,
               Options options);

  const SparseDataset& data() const noexcept { return *data_; }
  const LossModel& loss() const noexcept { return loss_; }
  const RegularizerModel& regularizer() const noexcept { return reg_; }
  double lambda() const noexcept { return lambda_; }
  double target(std::size_t i) const { return data_->label(i); }

 private:
  const SparseDataset* data_;
  LossModel loss_;
  RegularizerModel reg_;
  double lambda_;
};

/// f(w, alpha) = lambda sum_j phi(w_j) - (1/m) sum_i alpha_i <w, x_i>
///               - (1/m) sum_i l*(-alpha_i).
double saddle_value(const SaddleParams& params, std::span<const double> w, std::span<const double> alpha);

/// P(w): regularized risk.
double primal_objective(const SaddleParams& params, std::span<const double> w);

/// D(alpha) = min over the w box of f(w, alpha), solved per coordinate.
double dual_objective(const SaddleParams& params, std::span<const double> alpha);

/// The box minimizer used by dual_objective().
std::vector<double> dual_minimizer(const SaddleParams& params, std::span<const double> alpha);

/// P(w) - D(alpha). Both arguments must lie in their boxes. A negative value
/// below the rounding tolerance throws kInconsistentGap.
double duality_gap(const SaddleParams& params, std::span<const double> w, std::span<const double> alpha);

struct StochasticGradient {
  double w_component;      // coefficient on e_j
  double alpha_component;  // coefficient on e_i
};

/// g_{i,j}: the |Omega|-scaled single-entry estimate of (grad_w f, grad_alpha f).
/// Throws kIndexNotInOmega when x_ij = 0.
StochasticGradient stochastic_gradient(const SaddleParams& params, std::span<const double> w,
                                       std::span<const double> alpha, std::size_t i, std::size_t j);

/// Full (sub)gradient of P at w.
std::vector<double> batch_gradient(const SaddleParams& params, std::span<const double> w);

}  // namespace dso

#endif  // DSO_OBJECTIVE_HPP_
