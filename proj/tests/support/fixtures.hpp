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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dso/dataset.hpp"
#include "dso/error.hpp"
#include "dso/objective.hpp"

namespace dso::testing {

// 4 examples, 3 features, 9 nonzeros, labels +1 -1 +1 -1 (unfolded).
SparseDataset fixture_4x3();

// 4x4 with one nonzero missing per row, labels alternating.
SparseDataset fixture_4x4();

// Random 64x32 classification problem with roughly 400 nonzeros.
SparseDataset fixture_64x32(std::uint64_t seed);

// Two shards of equal size, 10 features: the first is 80% positive, the
// second 20%, and feature 1 correlates with the label in opposite
// directions in the two shards. Rows keep the shards contiguous so a
// contiguous p=2 partition splits along them.
SparseDataset heterogeneous_shards(std::size_t rows_per_shard, std::uint64_t seed);

SparseDataset parse_text(const std::string& text, LabelMode mode = LabelMode::kClassification);

// Dense reference evaluation, written independently of the library.
struct DenseProblem {
  std::size_t m = 0;
  std::size_t d = 0;
  std::vector<std::vector<double>> x;  // m x d, zeros included
  std::vector<double> y;
};

DenseProblem to_dense(const SparseDataset& data);

double dense_loss(LossKind loss, double u, double y);
double dense_primal(const DenseProblem& problem, LossKind loss, RegularizerKind reg, double lambda,
                    const std::vector<double>& w);

// Brute-force sup_u (-alpha u - l(u)) on a uniform grid.
double grid_conjugate(LossKind loss, double alpha, double y, double lo, double hi, double step);

template <typename F>
std::optional<ErrorCode> error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

std::vector<double> random_vector(std::size_t n, double lo, double hi, std::uint64_t seed);

}  // namespace dso::testing
