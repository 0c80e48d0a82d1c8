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

#include "dso/trace.hpp"

#include <ostream>
#include <sstream>
#include <vector>

#include "dso/error.hpp"
#include "dso/metrics.hpp"
#include "json.hpp"

namespace dso {
namespace {

nlohmann::ordered_json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

void add_test_metrics(EpochMetrics& metrics, const SparseDataset* test, std::span<const double> w) {
  if (test == nullptr) return;
  metrics.test_error = eval_test_error(w, *test);
  try {
    metrics.auprc = eval_auprc(w, *test);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSingleClass) throw;
  }
}

}  // namespace

std::string to_json(const EpochMetrics& m) {
  nlohmann::ordered_json j;
  j["epoch"] = m.epoch;
  j["wall_time_s"] = m.wall_time_s;
  j["primal"] = m.primal;
  j["dual"] = optional_json(m.dual);
  j["gap"] = optional_json(m.gap);
  j["avg_primal"] = optional_json(m.avg_primal);
  j["avg_gap"] = optional_json(m.avg_gap);
  j["test_error"] = optional_json(m.test_error);
  j["auprc"] = optional_json(m.auprc);
  return j.dump();
}

void MetricsTrace::write_jsonl(std::ostream& out) const {
  for (const auto& e : epochs) out << to_json(e) << '\n';
}

std::string MetricsTrace::to_jsonl() const {
  std::ostringstream out;
  write_jsonl(out);
  return out.str();
}

void IterateAverage::add(std::span<const double> w, std::span<const double> alpha) {
  if (count_ == 0) {
    w_.assign(w.begin(), w.end());
    alpha_.assign(alpha.begin(), alpha.end());
    count_ = 1;
    return;
  }
  ++count_;
  const double inv = 1.0 / static_cast<double>(count_);
  for (std::size_t k = 0; k < w_.size(); ++k) w_[k] += (w[k] - w_[k]) * inv;
  for (std::size_t k = 0; k < alpha_.size(); ++k) alpha_[k] += (alpha[k] - alpha_[k]) * inv;
}

EpochMetrics evaluate_epoch(const SaddleParams& params, const SparseDataset* test, std::size_t epoch,
                            double wall_time_s, std::span<const double> w, std::span<const double> alpha,
                            const IterateAverage* average) {
  EpochMetrics m;
  m.epoch = epoch;
  m.wall_time_s = wall_time_s;
  m.primal = primal_objective(params, w);
  m.dual = dual_objective(params, alpha);
  m.gap = duality_gap(params, w, alpha);
  if (average != nullptr && average->count() > 0) {
    // The running mean is a convex combination of box points; clamp away
    // rounding at the box edge.
    std::vector<double> avg_w = average->w();
    const auto box = params.regularizer().w_box();
    for (double& v : avg_w) v = box.clamp(v);
    m.avg_primal = primal_objective(params, avg_w);
    m.avg_gap = duality_gap(params, avg_w, average->alpha());
  }
  add_test_metrics(m, test, w);
  return m;
}

EpochMetrics evaluate_primal_epoch(const SaddleParams& params, const SparseDataset* test, std::size_t epoch,
                                   double wall_time_s, std::span<const double> w) {
  EpochMetrics m;
  m.epoch = epoch;
  m.wall_time_s = wall_time_s;
  m.primal = primal_objective(params, w);
  add_test_metrics(m, test, w);
  return m;
}

}  // namespace dso
