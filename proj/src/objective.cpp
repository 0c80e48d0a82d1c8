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

#include "dso/objective.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dso/error.hpp"

namespace dso {

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kHinge: return "hinge";
    case LossKind::kLogistic: return "logistic";
    case LossKind::kSquared: return "squared";
  }
  return "unknown";
}

std::string_view to_string(RegularizerKind kind) {
  return kind == RegularizerKind::kL2 ? "l2" : "l1";
}

LossKind parse_loss_kind(std::string_view name) {
  if (name == "hinge") return LossKind::kHinge;
  if (name == "logistic") return LossKind::kLogistic;
  if (name == "squared") return LossKind::kSquared;
  throw Error(ErrorCode::kInvalidArgument, "unknown loss '" + std::string(name) + "'");
}

RegularizerKind parse_regularizer_kind(std::string_view name) {
  if (name == "l2") return RegularizerKind::kL2;
  if (name == "l1") return RegularizerKind::kL1;
  throw Error(ErrorCode::kInvalidArgument, "unknown regularizer '" + std::string(name) + "'");
}

Interval LossModel::alpha_box() const {
  switch (kind) {
    case LossKind::kHinge: return {0.0, 1.0};
    case LossKind::kLogistic: return {kLogisticAlphaMargin, 1.0 - kLogisticAlphaMargin};
    case LossKind::kSquared: return {-alpha_bound, alpha_bound};
  }
  return {0.0, 0.0};
}

double loss_value(const LossModel& loss, double u, double target) {
  switch (loss.kind) {
    case LossKind::kHinge:
      return std::max(0.0, 1.0 - u);
    case LossKind::kLogistic:
      // log(1 + exp(-u)) without overflow for large |u|.
      return std::max(0.0, -u) + std::log1p(std::exp(-std::abs(u)));
    case LossKind::kSquared: {
      const double r = target - u;
      return 0.5 * r * r;
    }
  }
  return 0.0;
}

double loss_derivative(const LossModel& loss, double u, double target) {
  switch (loss.kind) {
    case LossKind::kHinge:
      return u < 1.0 ? -1.0 : 0.0;
    case LossKind::kLogistic:
      // -sigmoid(-u), written to stay finite for either sign of u.
      if (u >= 0) {
        const double e = std::exp(-u);
        return -e / (1.0 + e);
      } else {
        return -1.0 / (1.0 + std::exp(u));
      }
    case LossKind::kSquared:
      return u - target;
  }
  return 0.0;
}

double conjugate_value(const LossModel& loss, double alpha, double target) {
  if (!loss.alpha_box().contains(alpha)) {
    throw Error(ErrorCode::kDomain, "alpha = " + std::to_string(alpha) + " is outside the " +
                                        std::string(to_string(loss.kind)) + " dual box");
  }
  switch (loss.kind) {
    case LossKind::kHinge:
      return -alpha;
    case LossKind::kLogistic:
      return alpha * std::log(alpha) + (1.0 - alpha) * std::log1p(-alpha);
    case LossKind::kSquared:
      return -alpha * target + 0.5 * alpha * alpha;
  }
  return 0.0;
}

ConjugateGradient conjugate_grad(const LossModel& loss, double alpha, double target) {
  const Interval box = loss.alpha_box();
  const bool boundary = alpha <= box.lo || alpha >= box.hi;
  switch (loss.kind) {
    case LossKind::kHinge:
      return {1.0, boundary};
    case LossKind::kLogistic: {
      const double a = box.clamp(alpha);
      return {std::log1p(-a) - std::log(a), boundary};
    }
    case LossKind::kSquared:
      return {target - alpha, false};
  }
  return {0.0, false};
}

double reg_value(RegularizerKind kind, double w) {
  return kind == RegularizerKind::kL2 ? 0.5 * w * w : std::abs(w);
}

double reg_grad(RegularizerKind kind, double w) {
  if (kind == RegularizerKind::kL2) return w;
  return w > 0.0 ? 1.0 : (w < 0.0 ? -1.0 : 0.0);
}

double default_w_bound(const SparseDataset& data, const LossModel& loss, RegularizerKind reg,
                       double lambda) {
  if (lambda <= 0.0) return std::numeric_limits<double>::infinity();
  if (reg == RegularizerKind::kL2) {
    if (loss.kind == LossKind::kHinge) return 1.0 / std::sqrt(lambda);
    if (loss.kind == LossKind::kLogistic) return std::sqrt(std::numbers::ln2 / lambda);
  }
  // P(0): every margin is zero.
  double p0 = 0.0;
  for (std::size_t i = 0; i < data.num_examples(); ++i) p0 += loss_value(loss, 0.0, data.label(i));
  p0 /= static_cast<double>(data.num_examples());
  if (p0 <= 0.0) p0 = 1.0;
  return reg == RegularizerKind::kL2 ? std::sqrt(2.0 * p0 / lambda) : p0 / lambda;
}

SaddleParams::SaddleParams(const SparseDataset& data, LossModel loss, RegularizerKind reg, double lambda,
                           Options options)
    : data_(&data), loss_(loss), reg_{reg, 0.0}, lambda_(lambda) {
  if (!(lambda > 0.0) && !(options.allow_zero_lambda && lambda == 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be positive");
  }
  if (!std::isfinite(lambda)) throw Error(ErrorCode::kInvalidArgument, "lambda must be finite");
  if (loss.kind == LossKind::kSquared) {
    if (!(loss.alpha_bound > 0.0)) throw Error(ErrorCode::kInvalidArgument, "B_alpha must be positive");
    if (data.folded()) {
      throw Error(ErrorCode::kInvalidArgument, "squared loss needs the unfolded targets");
    }
  } else if (!data.folded()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(to_string(loss.kind)) + " loss expects labels folded into the data");
  }
  reg_.w_bound = options.w_bound ? *options.w_bound : default_w_bound(data, loss, reg, lambda);
  if (!(reg_.w_bound > 0.0)) throw Error(ErrorCode::kInvalidArgument, "w bound must be positive");
}

double saddle_value(const SaddleParams& params, std::span<const double> w, std::span<const double> alpha) {
  const auto& data = params.data();
  const double m = static_cast<double>(data.num_examples());
  double reg = 0.0;
  for (double wj : w) reg += reg_value(params.regularizer().kind, wj);
  double coupling = 0.0;
  double conj = 0.0;
  for (std::size_t i = 0; i < data.num_examples(); ++i) {
    coupling += alpha[i] * data.dot_row(i, w);
    conj += conjugate_value(params.loss(), alpha[i], params.target(i));
  }
  return params.lambda() * reg - coupling / m - conj / m;
}

double primal_objective(const SaddleParams& params, std::span<const double> w) {
  const auto& data = params.data();
  double reg = 0.0;
  for (double wj : w) reg += reg_value(params.regularizer().kind, wj);
  double risk = 0.0;
  for (std::size_t i = 0; i < data.num_examples(); ++i) {
    risk += loss_value(params.loss(), data.dot_row(i, w), params.target(i));
  }
  return params.lambda() * reg + risk / static_cast<double>(data.num_examples());
}

namespace {

// s_j = (1/m) sum_i alpha_i x_ij, the linear coefficient of w_j in f.
std::vector<double> coupling_coefficients(const SaddleParams& params, std::span<const double> alpha) {
  const auto& data = params.data();
  const double m = static_cast<double>(data.num_examples());
  std::vector<double> s(data.num_features(), 0.0);
  for (std::size_t j = 0; j < s.size(); ++j) {
    double acc = 0.0;
    for (const auto& e : data.col(j)) acc += alpha[e.index] * e.value;
    s[j] = acc / m;
  }
  return s;
}

// argmin over |w| <= W of lambda phi(w) - s w.
double box_minimizer(RegularizerKind kind, double lambda, double bound, double s) {
  if (kind == RegularizerKind::kL2) {
    return std::clamp(s / lambda, -bound, bound);
  }
  if (std::abs(s) <= lambda) return 0.0;
  return s > 0.0 ? bound : -bound;
}

}  // namespace

std::vector<double> dual_minimizer(const SaddleParams& params, std::span<const double> alpha) {
  auto s = coupling_coefficients(params, alpha);
  const auto& reg = params.regularizer();
  for (double& sj : s) sj = box_minimizer(reg.kind, params.lambda(), reg.w_bound, sj);
  return s;
}

double dual_objective(const SaddleParams& params, std::span<const double> alpha) {
  const auto& data = params.data();
  const auto& reg = params.regularizer();
  const auto s = coupling_coefficients(params, alpha);
  double value = 0.0;
  for (double sj : s) {
    const double wj = box_minimizer(reg.kind, params.lambda(), reg.w_bound, sj);
    value += params.lambda() * reg_value(reg.kind, wj) - sj * wj;
  }
  double conj = 0.0;
  for (std::size_t i = 0; i < data.num_examples(); ++i) {
    conj += conjugate_value(params.loss(), alpha[i], params.target(i));
  }
  return value - conj / static_cast<double>(data.num_examples());
}

double duality_gap(const SaddleParams& params, std::span<const double> w, std::span<const double> alpha) {
  const auto wbox = params.regularizer().w_box();
  for (double wj : w) {
    if (!wbox.contains(wj)) throw Error(ErrorCode::kDomain, "w lies outside its box");
  }
  const double primal = primal_objective(params, w);
  const double dual = dual_objective(params, alpha);
  const double gap = primal - dual;
  if (gap < -1e-9 * std::max(1.0, std::abs(primal))) {
    throw Error(ErrorCode::kInconsistentGap,
                "duality gap " + std::to_string(gap) + " is negative (primal " + std::to_string(primal) +
                    ", dual " + std::to_string(dual) + ")");
  }
  return gap;
}

StochasticGradient stochastic_gradient(const SaddleParams& params, std::span<const double> w,
                                       std::span<const double> alpha, std::size_t i, std::size_t j) {
  const auto& data = params.data();
  const auto x = data.find(i, j);
  if (!x) {
    throw Error(ErrorCode::kIndexNotInOmega,
                "(" + std::to_string(i) + ", " + std::to_string(j) + ") is not a stored nonzero");
  }
  const double m = static_cast<double>(data.num_examples());
  const double omega = static_cast<double>(data.nnz());
  const double col = static_cast<double>(data.col_nnz(j));
  const double row = static_cast<double>(data.row_nnz(i));
  const double gw =
      omega * (params.lambda() * reg_grad(params.regularizer().kind, w[j]) / col - alpha[i] * *x / m);
  const double ga =
      omega * (conjugate_grad(params.loss(), alpha[i], params.target(i)).value / (m * row) - w[j] * *x / m);
  return {gw, ga};
}

std::vector<double> batch_gradient(const SaddleParams& params, std::span<const double> w) {
  const auto& data = params.data();
  const double m = static_cast<double>(data.num_examples());
  std::vector<double> grad(data.num_features());
  for (std::size_t j = 0; j < grad.size(); ++j) {
    grad[j] = params.lambda() * reg_grad(params.regularizer().kind, w[j]);
  }
  for (std::size_t i = 0; i < data.num_examples(); ++i) {
    const double d = loss_derivative(params.loss(), data.dot_row(i, w), params.target(i));
    if (d == 0.0) continue;
    for (const auto& e : data.row(i)) grad[e.index] += d * e.value / m;
  }
  return grad;
}

}  // namespace dso
