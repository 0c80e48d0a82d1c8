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

#include "dso/partition.hpp"

#include <algorithm>
#include <numeric>

#include "dso/error.hpp"
#include "json.hpp"

namespace dso {
namespace {

std::vector<std::vector<Index>> contiguous_split(std::size_t n, std::size_t p) {
  std::vector<std::vector<Index>> blocks(p);
  const std::size_t base = n / p;
  const std::size_t extra = n % p;
  Index next = 0;
  for (std::size_t q = 0; q < p; ++q) {
    const std::size_t size = base + (q < extra ? 1 : 0);
    blocks[q].resize(size);
    std::iota(blocks[q].begin(), blocks[q].end(), next);
    next += static_cast<Index>(size);
  }
  return blocks;
}

// Largest-first assignment to the lightest block that still has room. The
// capacities keep every block at floor(n/p) or ceil(n/p) members.
std::vector<std::vector<Index>> greedy_split(const std::vector<std::size_t>& weight, std::size_t p) {
  const std::size_t n = weight.size();
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return weight[a] > weight[b]; });

  std::vector<std::size_t> capacity(p, n / p);
  for (std::size_t q = 0; q < n % p; ++q) ++capacity[q];
  std::vector<std::size_t> load(p, 0);
  std::vector<std::vector<Index>> blocks(p);
  for (Index idx : order) {
    std::size_t best = p;
    for (std::size_t q = 0; q < p; ++q) {
      if (blocks[q].size() >= capacity[q]) continue;
      if (best == p || load[q] < load[best]) best = q;
    }
    blocks[best].push_back(idx);
    load[best] += weight[idx];
  }
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  return blocks;
}

}  // namespace

std::string_view to_string(PartitionStrategy strategy) {
  return strategy == PartitionStrategy::kContiguous ? "contiguous" : "greedy";
}

PartitionStrategy parse_partition_strategy(std::string_view name) {
  if (name == "contiguous") return PartitionStrategy::kContiguous;
  if (name == "greedy" || name == "nnz-balanced-greedy") return PartitionStrategy::kGreedy;
  throw Error(ErrorCode::kInvalidArgument, "unknown partition strategy '" + std::string(name) + "'");
}

PartitionPlan make_partition(const SparseDataset& dataset, std::size_t p, PartitionStrategy strategy) {
  const std::size_t m = dataset.num_examples();
  const std::size_t d = dataset.num_features();
  if (p < 1 || p > std::min(m, d)) {
    throw Error(ErrorCode::kInvalidArgument,
                "worker count " + std::to_string(p) + " must lie in [1, min(m, d)] = [1, " +
                    std::to_string(std::min(m, d)) + "]");
  }

  PartitionPlan plan;
  plan.p_ = p;
  plan.strategy_ = strategy;
  if (strategy == PartitionStrategy::kContiguous) {
    plan.row_blocks_ = contiguous_split(m, p);
    plan.col_blocks_ = contiguous_split(d, p);
  } else {
    std::vector<std::size_t> row_weight(m), col_weight(d);
    for (std::size_t i = 0; i < m; ++i) row_weight[i] = dataset.row_nnz(i);
    for (std::size_t j = 0; j < d; ++j) col_weight[j] = dataset.col_nnz(j);
    plan.row_blocks_ = greedy_split(row_weight, p);
    plan.col_blocks_ = greedy_split(col_weight, p);
  }

  plan.row_block_of_.resize(m);
  plan.row_local_.resize(m);
  for (std::size_t q = 0; q < p; ++q) {
    for (std::size_t k = 0; k < plan.row_blocks_[q].size(); ++k) {
      plan.row_block_of_[plan.row_blocks_[q][k]] = static_cast<Index>(q);
      plan.row_local_[plan.row_blocks_[q][k]] = static_cast<Index>(k);
    }
  }
  plan.col_block_of_.resize(d);
  plan.col_local_.resize(d);
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t k = 0; k < plan.col_blocks_[r].size(); ++k) {
      plan.col_block_of_[plan.col_blocks_[r][k]] = static_cast<Index>(r);
      plan.col_local_[plan.col_blocks_[r][k]] = static_cast<Index>(k);
    }
  }

  // Counting sort of Omega into blocks; rows are scanned in order, so each
  // block keeps (i, j) order.
  std::vector<std::size_t> counts(p * p + 1, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t q = plan.row_block_of_[i];
    for (const auto& e : dataset.row(i)) ++counts[q * p + plan.col_block_of_[e.index] + 1];
  }
  std::partial_sum(counts.begin(), counts.end(), counts.begin());
  plan.offsets_ = counts;
  plan.entries_.resize(dataset.nnz());
  std::vector<std::size_t> cursor(counts.begin(), counts.end() - 1);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t q = plan.row_block_of_[i];
    for (const auto& e : dataset.row(i)) {
      plan.entries_[cursor[q * p + plan.col_block_of_[e.index]]++] =
          OmegaEntry{static_cast<Index>(i), e.index, e.value};
    }
  }
  return plan;
}

std::size_t sigma(std::size_t r, std::size_t q, std::size_t p) {
  return ((q + r - 2) % p) + 1;
}

std::size_t sigma_inverse(std::size_t r, std::size_t block, std::size_t p) {
  // Solve ((q + r - 2) mod p) + 1 = block for q in 1..p.
  const std::size_t rr = (r - 1) % p;
  return ((block - 1 + p - rr) % p) + 1;
}

std::vector<std::pair<std::size_t, std::size_t>> exchange_route(std::size_t r, std::size_t p) {
  std::vector<std::pair<std::size_t, std::size_t>> route;
  route.reserve(p);
  for (std::size_t q = 1; q <= p; ++q) route.emplace_back(q, sigma_inverse(r + 1, sigma(r, q, p), p));
  return route;
}

std::string plan_to_json(const PartitionPlan& plan) {
  nlohmann::ordered_json j;
  const std::size_t p = plan.workers();
  j["p"] = p;
  j["strategy"] = to_string(plan.strategy());
  j["nnz"] = plan.total_nnz();
  std::vector<std::size_t> rows, cols;
  for (std::size_t q = 0; q < p; ++q) {
    rows.push_back(plan.row_block(q).size());
    cols.push_back(plan.col_block(q).size());
  }
  j["row_block_sizes"] = rows;
  j["col_block_sizes"] = cols;
  std::vector<std::vector<std::size_t>> nnz(p, std::vector<std::size_t>(p));
  for (std::size_t q = 0; q < p; ++q) {
    for (std::size_t r = 0; r < p; ++r) nnz[q][r] = plan.block_nnz(q, r);
  }
  j["block_nnz"] = nnz;
  return j.dump();
}

}  // namespace dso
