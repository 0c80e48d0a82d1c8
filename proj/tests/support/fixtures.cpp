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

#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace dso::testing {

SparseDataset parse_text(const std::string& text, LabelMode mode) {
  std::istringstream in(text);
  return parse_libsvm(in, ParseOptions{mode, 0});
}

SparseDataset fixture_4x3() {
  return parse_text(
      "+1 1:1.0 2:-0.5\n"
      "-1 2:2.0 3:1.0\n"
      "+1 1:0.5 3:-1.5\n"
      "-1 1:-1.0 2:1.0 3:0.5\n");
}

SparseDataset fixture_4x4() {
  return parse_text(
      "+1 1:1.0 2:0.5 3:-0.25\n"
      "-1 2:1.5 3:0.75 4:-1.0\n"
      "+1 1:-0.5 3:2.0 4:1.25\n"
      "-1 1:0.8 2:-1.2 4:0.3\n");
}

SparseDataset fixture_64x32(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 31);
  std::vector<double> truth(32);
  for (double& v : truth) v = gauss(rng);
  std::vector<SparseRow> rows(64);
  for (auto& row : rows) {
    std::vector<int> cols;
    while (cols.size() < 6) {
      const int j = pick(rng);
      if (std::find(cols.begin(), cols.end(), j) == cols.end()) cols.push_back(j);
    }
    double score = 0.0;
    for (int j : cols) {
      const double v = gauss(rng);
      row.entries.push_back({static_cast<Index>(j), v});
      score += truth[j] * v;
    }
    row.label = score >= 0 ? 1.0 : -1.0;
  }
  // Every column gets at least one entry so blocks are never column-empty.
  for (int j = 0; j < 32; ++j) {
    auto& row = rows[2 * j];
    const bool present = std::any_of(row.entries.begin(), row.entries.end(),
                                     [j](const Nonzero& nz) { return nz.index == static_cast<Index>(j); });
    if (!present) row.entries.push_back({static_cast<Index>(j), 0.5 + 0.01 * j});
  }
  return SparseDataset::from_rows(std::move(rows), 32, LabelMode::kClassification);
}

SparseDataset heterogeneous_shards(std::size_t rows_per_shard, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<SparseRow> rows;
  rows.reserve(2 * rows_per_shard);
  for (int shard = 0; shard < 2; ++shard) {
    const double positive_rate = shard == 0 ? 0.8 : 0.2;
    const double flip = shard == 0 ? 1.0 : -1.0;
    for (std::size_t k = 0; k < rows_per_shard; ++k) {
      SparseRow row;
      row.label = unit(rng) < positive_rate ? 1.0 : -1.0;
      const double y = row.label;
      row.entries.push_back({0, 1.0});
      // Feature 1 predicts the label within a shard, with opposite signs in
      // the two shards; pooled, it carries no signal. Feature 2 is a weaker
      // predictor shared by both shards.
      row.entries.push_back({1, flip * y + 0.3 * gauss(rng)});
      row.entries.push_back({2, y + gauss(rng)});
      for (Index j = 3; j < 10; ++j) {
        if (unit(rng) < 0.3) row.entries.push_back({j, gauss(rng)});
      }
      rows.push_back(std::move(row));
    }
  }
  return SparseDataset::from_rows(std::move(rows), 10, LabelMode::kClassification);
}

DenseProblem to_dense(const SparseDataset& data) {
  DenseProblem p;
  p.m = data.num_examples();
  p.d = data.num_features();
  p.x.assign(p.m, std::vector<double>(p.d, 0.0));
  p.y.assign(data.labels().begin(), data.labels().end());
  for (std::size_t i = 0; i < p.m; ++i) {
    for (const auto& nz : data.row(i)) p.x[i][nz.index] = nz.value;
  }
  return p;
}

double dense_loss(LossKind loss, double u, double y) {
  switch (loss) {
    case LossKind::kHinge:
      return std::max(0.0, 1.0 - u);
    case LossKind::kLogistic:
      return std::log(1.0 + std::exp(-u));
    case LossKind::kSquared:
      return 0.5 * (u - y) * (u - y);
  }
  return 0.0;
}

double dense_primal(const DenseProblem& problem, LossKind loss, RegularizerKind reg, double lambda,
                    const std::vector<double>& w) {
  double penalty = 0.0;
  for (double v : w) penalty += reg == RegularizerKind::kL2 ? 0.5 * v * v : std::abs(v);
  double risk = 0.0;
  for (std::size_t i = 0; i < problem.m; ++i) {
    double u = 0.0;
    for (std::size_t j = 0; j < problem.d; ++j) u += problem.x[i][j] * w[j];
    risk += dense_loss(loss, u, problem.y[i]);
  }
  return lambda * penalty + risk / static_cast<double>(problem.m);
}

double grid_conjugate(LossKind loss, double alpha, double y, double lo, double hi, double step) {
  double best = -std::numeric_limits<double>::infinity();
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step));
  for (std::size_t k = 0; k <= n; ++k) {
    const double u = lo + step * static_cast<double>(k);
    best = std::max(best, -alpha * u - dense_loss(loss, u, y));
  }
  return best;
}

std::vector<double> random_vector(std::size_t n, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

}  // namespace dso::testing
