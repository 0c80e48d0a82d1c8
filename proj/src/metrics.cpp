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

#include "dso/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "dso/error.hpp"
#include "json.hpp"

namespace dso {

double eval_test_error(std::span<const double> w, const SparseDataset& test) {
  const auto labels = test.raw_labels();
  std::size_t errors = 0;
  for (std::size_t i = 0; i < test.num_examples(); ++i) {
    const double score = test.raw_score(i, w);
    if (score == 0.0 || (score > 0.0) != (labels[i] > 0.0)) ++errors;
  }
  return static_cast<double>(errors) / static_cast<double>(test.num_examples());
}

double eval_auprc(std::span<const double> w, const SparseDataset& test) {
  std::vector<double> scores(test.num_examples());
  for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = test.raw_score(i, w);
  return auprc(scores, test.raw_labels());
}

double auprc(std::span<const double> scores, std::span<const double> labels) {
  if (scores.size() != labels.size()) throw Error(ErrorCode::kInvalidArgument, "scores and labels differ in length");
  const std::size_t n = scores.size();
  const auto positives = static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), [](double y) { return y > 0; }));
  if (positives == 0 || positives == n) {
    throw Error(ErrorCode::kSingleClass, "precision-recall needs both classes in the test set");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  double area = 0.0;
  double prev_recall = 0.0;
  std::size_t tp = 0;
  std::size_t seen = 0;
  for (std::size_t k = 0; k < n;) {
    std::size_t end = k;
    while (end < n && scores[order[end]] == scores[order[k]]) {
      if (labels[order[end]] > 0) ++tp;
      ++end;
    }
    seen = end;
    const double recall = static_cast<double>(tp) / static_cast<double>(positives);
    const double precision = static_cast<double>(tp) / static_cast<double>(seen);
    area += (recall - prev_recall) * precision;
    prev_recall = recall;
    k = end;
  }
  return area;
}

ScalingModel fit_scaling_model(std::span<const ScalingSample> samples) {
  std::set<double> distinct;
  for (const auto& s : samples) {
    if (!(s.workers > 0.0)) throw Error(ErrorCode::kInvalidArgument, "worker counts must be positive");
    distinct.insert(s.workers);
  }
  if (distinct.size() < 2) {
    throw Error(ErrorCode::kSingularDesign, "need at least two distinct worker counts");
  }
  // Normal equations for t = A x + B with x = 1/p.
  const double n = static_cast<double>(samples.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& s : samples) {
    const double x = 1.0 / s.workers;
    sx += x;
    sy += s.epoch_time;
    sxx += x * x;
    sxy += x * s.epoch_time;
  }
  const double det = n * sxx - sx * sx;
  ScalingModel model;
  model.a = (n * sxy - sx * sy) / det;
  model.b = (sy - model.a * sx) / n;

  const double mean = sy / n;
  double ss_res = 0, ss_tot = 0;
  for (const auto& s : samples) {
    const double r = s.epoch_time - model.predict(s.workers);
    ss_res += r * r;
    ss_tot += (s.epoch_time - mean) * (s.epoch_time - mean);
  }
  model.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : (ss_res == 0 ? 1.0 : 0.0);
  return model;
}

std::string scaling_to_json(const ScalingModel& model, std::span<const ScalingSample> samples,
                            std::span<const double> predict_at) {
  nlohmann::ordered_json j;
  j["A"] = model.a;
  j["B"] = model.b;
  j["r_squared"] = model.r_squared;
  j["physical"] = model.physical();
  auto arr = nlohmann::ordered_json::array();
  for (const auto& s : samples) arr.push_back({{"p", s.workers}, {"epoch_time_s", s.epoch_time}});
  j["samples"] = arr;
  auto pred = nlohmann::ordered_json::array();
  for (double p : predict_at) pred.push_back({{"p", p}, {"epoch_time_s", model.predict(p)}});
  j["predictions"] = pred;
  return j.dump();
}

std::string to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["examples"] = report.examples;
  j["positives"] = report.positives;
  j["negatives"] = report.negatives;
  j["test_error"] = report.test_error;
  j["auprc"] = report.auprc ? nlohmann::ordered_json(*report.auprc) : nlohmann::ordered_json(nullptr);
  j["ignored_features"] = report.ignored_features;
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  j["primal"] = opt(report.primal);
  j["dual"] = opt(report.dual);
  j["gap"] = opt(report.gap);
  return j.dump();
}

}  // namespace dso
