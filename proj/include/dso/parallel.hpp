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

#ifndef DSO_PARALLEL_HPP_
#define DSO_PARALLEL_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dso/dataset.hpp"
#include "dso/partition.hpp"
#include "dso/serial.hpp"
#include "dso/trace.hpp"
#include "dso/update_log.hpp"

namespace dso {

struct EpochTimings {
  std::size_t workers = 0;
  // Wall time of each epoch: p inner iterations plus their exchanges.
  // Objective evaluation is excluded.
  std::vector<double> epoch_s;
  // compute_s[(t-1)*p + (r-1)][q-1]: time worker q spent on its block.
  std::vector<std::vector<double>> compute_s;
  // Barrier-to-barrier hand-off time after each inner iteration.
  std::vector<double> exchange_s;

  /// Mean epoch time over epochs warmup+1..T. Throws kInsufficientSamples if
  /// nothing is left after the warmup.
  double mean_epoch_time(std::size_t warmup) const;
};

struct DsoRun {
  ModelState state;
  MetricsTrace trace;
  std::optional<UpdateLog> log;
  EpochTimings timings;
  // holdings[(t-1)*p + (r-1)][q-1]: 0-based column block held by worker q
  // while it ran inner iteration r of epoch t.
  std::vector<std::vector<std::size_t>> holdings;
};

/// Runs the bulk-synchronous DSO algorithm on plan.workers() threads. In
/// inner iteration r worker q updates every entry of block
/// (q, sigma_r(q)) of Omega; all workers then meet at a barrier where the
/// w blocks (with their AdaGrad accumulators) move one step along the ring.
/// alpha blocks never move. `test` may be null.
///
/// With config.log_updates the run also returns the update log in
/// serialization order; exceeding config.max_log_records aborts the run
/// with kLogOverflow. An exception on any worker aborts the run with
/// kWorkerFailure.
DsoRun run_dso(const SparseDataset& data, const PartitionPlan& plan, const TrainConfig& config,
               const SparseDataset* test = nullptr);

/// Serially re-applies a logged run, starting from initial_state(). The
/// result is bit-identical to the parallel run that produced the log.
/// Throws kCorruptLog for records outside Omega.
ModelState replay_log(const SparseDataset& data, const TrainConfig& config, std::span<const UpdateRecord> log);

struct PsgdRun {
  PrimalState state;
  MetricsTrace trace;
};

/// Parameter-averaging baseline: every epoch each worker runs SGD on its row
/// block I_q from the shared w, then w becomes the mean of the worker copies.
PsgdRun run_psgd(const SparseDataset& data, const PartitionPlan& plan, const TrainConfig& config,
                 const SparseDataset* test = nullptr);

/// run_dso without evaluation or logging, timed.
EpochTimings measure_epoch_times(const SparseDataset& data, const PartitionPlan& plan, const TrainConfig& config,
                                 std::size_t warmup);

}  // namespace dso

#endif  // DSO_PARALLEL_HPP_
