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

#ifndef DSO_PARTITION_HPP_
#define DSO_PARTITION_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dso/dataset.hpp"

namespace dso {

enum class PartitionStrategy {
  kContiguous,  // I_q and J_r are consecutive index ranges
  kGreedy,      // nnz-balanced assignment, largest rows/columns first
};

std::string_view to_string(PartitionStrategy strategy);
PartitionStrategy parse_partition_strategy(std::string_view name);

/// A p-way split of the examples (row blocks I_q) and features (column
/// blocks J_r) together with the induced p x p split of Omega. Blocks are
/// indexed 0-based here; the rotation helpers below use the 1-based worker
/// numbering of the algorithm.
class PartitionPlan {
 public:
  std::size_t workers() const noexcept { return p_; }
  PartitionStrategy strategy() const noexcept { return strategy_; }

  std::span<const Index> row_block(std::size_t q) const { return row_blocks_[q]; }
  std::span<const Index> col_block(std::size_t r) const { return col_blocks_[r]; }

  std::size_t row_block_of(std::size_t i) const { return row_block_of_[i]; }
  std::size_t col_block_of(std::size_t j) const { return col_block_of_[j]; }
  // Position of i within I_{row_block_of(i)} (resp. j within its J block).
  std::size_t row_local(std::size_t i) const { return row_local_[i]; }
  std::size_t col_local(std::size_t j) const { return col_local_[j]; }

  /// Omega^(q,r) sorted by (i, j).
  std::span<const OmegaEntry> block(std::size_t q, std::size_t r) const {
    const auto k = q * p_ + r;
    return {entries_.data() + offsets_[k], entries_.data() + offsets_[k + 1]};
  }
  std::size_t block_nnz(std::size_t q, std::size_t r) const {
    const auto k = q * p_ + r;
    return offsets_[k + 1] - offsets_[k];
  }
  std::size_t total_nnz() const noexcept { return entries_.size(); }

 private:
  friend PartitionPlan make_partition(const SparseDataset&, std::size_t, PartitionStrategy);

  std::size_t p_ = 0;
  PartitionStrategy strategy_ = PartitionStrategy::kContiguous;
  std::vector<std::vector<Index>> row_blocks_;
  std::vector<std::vector<Index>> col_blocks_;
  std::vector<Index> row_block_of_;
  std::vector<Index> col_block_of_;
  std::vector<Index> row_local_;
  std::vector<Index> col_local_;
  std::vector<std::size_t> offsets_;  // p*p + 1 block boundaries into entries_
  std::vector<OmegaEntry> entries_;
};

/// Requires 1 <= p <= min(m, d). Block sizes differ by at most one.
PartitionPlan make_partition(const SparseDataset& dataset, std::size_t p,
                             PartitionStrategy strategy = PartitionStrategy::kContiguous);

/// sigma_r(q) = ((q + r - 2) mod p) + 1: the column block held by worker q
/// during inner iteration r. Everything is 1-based; r may exceed p.
std::size_t sigma(std::size_t r, std::size_t q, std::size_t p);

/// The worker that holds column block `block` during inner iteration r.
std::size_t sigma_inverse(std::size_t r, std::size_t block, std::size_t p);

/// (sender, receiver) for every worker q after inner iteration r: worker q
/// ships block sigma_r(q) to sigma_{r+1}^{-1}(sigma_r(q)).
std::vector<std::pair<std::size_t, std::size_t>> exchange_route(std::size_t r, std::size_t p);

/// {"p", "strategy", "m", "d", "nnz", "row_block_sizes", "col_block_sizes", "block_nnz"}.
std::string plan_to_json(const PartitionPlan& plan);

}  // namespace dso

#endif  // DSO_PARTITION_HPP_
