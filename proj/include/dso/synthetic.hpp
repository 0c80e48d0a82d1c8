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

#ifndef DSO_SYNTHETIC_HPP_
#define DSO_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>

#include "dso/dataset.hpp"

namespace dso {

struct SyntheticSpec {
  std::size_t examples = 1000;
  std::size_t features = 100;
  // Expected fraction of nonzero entries; every row gets at least one.
  double density = 0.1;
  std::uint64_t seed = 0;
  // Probability of flipping each label after it is drawn from a random
  // hyperplane. Zero gives linearly separable data.
  double label_noise = 0.0;
};

/// Classification data: Gaussian values on a random sparsity pattern and
/// labels sign(<w*, x>) for a random Gaussian w*.
SparseDataset make_synthetic(const SyntheticSpec& spec);

}  // namespace dso

#endif  // DSO_SYNTHETIC_HPP_
