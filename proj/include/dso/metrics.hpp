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

#ifndef DSO_METRICS_HPP_
#define DSO_METRICS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dso/dataset.hpp"

namespace dso {

/// Fraction of test examples whose raw label disagrees with sign(<w, x>).
/// A score of exactly zero counts as an error. Test features at or beyond
/// w.size() are ignored. Works on folded or unfolded data.
double eval_test_error(std::span<const double> w, const SparseDataset& test);

/// Area under the precision-recall curve of the scores <w, x> against the
/// raw labels. Throws kSingleClass when the test set has one class only.
double eval_auprc(std::span<const double> w, const SparseDataset& test);

/// Step-wise AUPRC: scores are swept from high to low, tied scores enter
/// together, and each recall increment is weighted by the precision at that
/// threshold. Labels are +1 / -1.
double auprc(std::span<const double> scores, std::span<const double> labels);

struct ScalingSample {
  double workers;
  double epoch_time;
};

/// t(p) = A / p + B, with A = |Omega| T_u and B = T_c.
struct ScalingModel {
  double a = 0.0;
  double b = 0.0;
  double r_squared = 0.0;

  double predict(double workers) const { return a / workers + b; }
  // A > 0 and B >= 0; a least-squares fit to noisy timings can violate it.
  bool physical() const { return a > 0.0 && b >= 0.0; }
};

/// Least squares over the basis {1/p, 1}; exact interpolation for two
/// samples. Needs at least two distinct worker counts (kSingularDesign).
ScalingModel fit_scaling_model(std::span<const ScalingSample> samples);

std::string scaling_to_json(const ScalingModel& model, std::span<const ScalingSample> samples,
                            std::span<const double> predict_at);

struct EvalReport {
  std::size_t examples = 0;
  double test_error = 0.0;
  std::optional<double> auprc;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t ignored_features = 0;  // test features beyond the model dimension
  std::optional<double> primal;
  std::optional<double> dual;
  std::optional<double> gap;
};

std::string to_json(const EvalReport& report);

}  // namespace dso

#endif  // DSO_METRICS_HPP_
