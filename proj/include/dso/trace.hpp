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

#ifndef DSO_TRACE_HPP_
#define DSO_TRACE_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dso/dataset.hpp"
#include "dso/objective.hpp"

namespace dso {

// One line of the JSONL metrics trace. Objectives are at the last iterate;
// the avg_* fields are at the running average of the epoch-end iterates.
struct EpochMetrics {
  std::size_t epoch = 0;
  double wall_time_s = 0.0;
  double primal = 0.0;
  std::optional<double> dual;
  std::optional<double> gap;
  std::optional<double> avg_primal;
  std::optional<double> avg_gap;
  std::optional<double> test_error;
  std::optional<double> auprc;
};

struct MetricsTrace {
  std::vector<EpochMetrics> epochs;

  void write_jsonl(std::ostream& out) const;
  std::string to_jsonl() const;
};

std::string to_json(const EpochMetrics& metrics);

/// Running mean of the epoch-end iterates (w^1..w^t, alpha^1..alpha^t).
class IterateAverage {
 public:
  void add(std::span<const double> w, std::span<const double> alpha);

  std::size_t count() const noexcept { return count_; }
  const std::vector<double>& w() const noexcept { return w_; }
  const std::vector<double>& alpha() const noexcept { return alpha_; }

 private:
  std::size_t count_ = 0;
  std::vector<double> w_;
  std::vector<double> alpha_;
};

/// Computes one trace line. `test` may be null; AUPRC is skipped for a
/// single-class test set.
EpochMetrics evaluate_epoch(const SaddleParams& params, const SparseDataset* test, std::size_t epoch,
                            double wall_time_s, std::span<const double> w, std::span<const double> alpha,
                            const IterateAverage* average);

/// Same, for methods without a dual iterate.
EpochMetrics evaluate_primal_epoch(const SaddleParams& params, const SparseDataset* test, std::size_t epoch,
                                   double wall_time_s, std::span<const double> w);

}  // namespace dso

#endif  // DSO_TRACE_HPP_
