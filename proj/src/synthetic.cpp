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

#include "dso/synthetic.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <unordered_set>
#include <vector>

#include "dso/error.hpp"

namespace dso {

SparseDataset make_synthetic(const SyntheticSpec& spec) {
  if (spec.examples == 0 || spec.features == 0) throw Error(ErrorCode::kInvalidArgument, "empty synthetic shape");
  if (!(spec.density > 0.0 && spec.density <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "density must lie in (0, 1]");
  }
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::binomial_distribution<std::size_t> row_size(spec.features, spec.density);
  std::bernoulli_distribution flip(spec.label_noise);

  std::vector<double> truth(spec.features);
  for (double& v : truth) v = gauss(rng);

  std::vector<Index> all;
  std::unordered_set<Index> picked;
  std::vector<SparseRow> rows(spec.examples);
  for (auto& row : rows) {
    const std::size_t k = std::max<std::size_t>(1, row_size(rng));
    if (4 * k < spec.features) {
      picked.clear();
      std::uniform_int_distribution<Index> pick(0, static_cast<Index>(spec.features - 1));
      while (picked.size() < k) picked.insert(pick(rng));
      row.entries.reserve(k);
      for (Index j : picked) row.entries.push_back({j, 0.0});
      std::sort(row.entries.begin(), row.entries.end(), [](const Nonzero& a, const Nonzero& b) { return a.index < b.index; });
    } else {
      if (all.empty()) {
        all.resize(spec.features);
        std::iota(all.begin(), all.end(), 0);
      }
      std::vector<Index> chosen;
      std::sample(all.begin(), all.end(), std::back_inserter(chosen), k, rng);
      for (Index j : chosen) row.entries.push_back({j, 0.0});
    }
    double score = 0.0;
    for (auto& e : row.entries) {
      e.value = gauss(rng);
      score += truth[e.index] * e.value;
    }
    double y = score >= 0.0 ? 1.0 : -1.0;
    if (spec.label_noise > 0.0 && flip(rng)) y = -y;
    row.label = y;
  }
  return SparseDataset::from_rows(std::move(rows), spec.features, LabelMode::kClassification);
}

}  // namespace dso
