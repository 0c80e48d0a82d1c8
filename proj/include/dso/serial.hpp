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

#ifndef DSO_SERIAL_HPP_
#define DSO_SERIAL_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dso/dataset.hpp"
#include "dso/objective.hpp"
#include "dso/partition.hpp"
#include "dso/trace.hpp"

namespace dso {

enum class ScheduleKind {
  kInvSqrtT,  // eta_0 / sqrt(t), shared by all coordinates in epoch t
  kAdaGrad,   // eta_0 / sqrt(eps + sum of squared past gradients), per coordinate
  kLemma2,    // sqrt(D / (2 C t))
};

std::string_view to_string(ScheduleKind kind);
ScheduleKind parse_schedule_kind(std::string_view name);

struct StepSchedule {
  ScheduleKind kind = ScheduleKind::kInvSqrtT;
  double eta0 = 1.0;
  double epsilon = 1e-8;
  double lemma2_d = 1.0;
  double lemma2_c = 1.0;

  bool adaptive() const noexcept { return kind == ScheduleKind::kAdaGrad; }

  /// The step for epoch t. For AdaGrad this is eta_0; the per-coordinate
  /// scaling happens inside the update.
  double epoch_step(std::size_t t) const;
};

/// eta for epoch t (t >= 1) given the coordinate's accumulated squared
/// gradient. Only AdaGrad reads the accumulator; with an empty accumulator it
/// returns eta_0 / sqrt(eps), so callers add the current gradient first.
double step_size(const StepSchedule& schedule, std::size_t t, double accumulated_sq_grad);

struct ModelState {
  std::vector<double> w;
  std::vector<double> alpha;
  // Present only under the AdaGrad schedule.
  std::vector<double> adagrad_w;
  std::vector<double> adagrad_alpha;

  friend bool operator==(const ModelState&, const ModelState&) = default;
};

/// w = 0 and alpha = 0 projected onto the dual box.
ModelState initial_state(const SaddleParams& params, const StepSchedule& schedule);

struct TrainConfig {
  double lambda = 1e-3;
  LossKind loss = LossKind::kHinge;
  RegularizerKind regularizer = RegularizerKind::kL2;
  StepSchedule schedule;
  std::size_t epochs = 10;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  double alpha_bound = kDefaultAlphaBound;
  std::optional<double> w_bound;
  PartitionStrategy partition = PartitionStrategy::kContiguous;
  // Reshuffle each block's update order every epoch; otherwise (i, j) order.
  bool shuffle = true;
  // Evaluate objectives every this many epochs (0 disables the trace).
  std::size_t eval_every = 0;
  bool log_updates = false;
  std::size_t max_log_records = std::numeric_limits<std::size_t>::max();
};

/// Validates the config (lambda > 0, T >= 1, p >= 1) and builds the params.
SaddleParams make_params(const SparseDataset& data, const TrainConfig& config);

/// One saddle-point step on the pair (w_j, alpha_i): descent in w_j, ascent
/// in alpha_i, both from the pre-update values, then projection onto the
/// boxes. Under an adaptive schedule `eta` is eta_0 and the accumulators in
/// `state` scale it per coordinate. Throws kIndexNotInOmega when x_ij = 0.
void dso_update(ModelState& state, const SaddleParams& params, std::size_t i, std::size_t j, double eta,
                const StepSchedule& schedule = {});

/// Applies dso_update to every entry of `order` with the epoch-t step. The
/// x values in `order` are trusted to match the dataset.
void serial_dso_epoch(ModelState& state, const SaddleParams& params, std::span<const OmegaEntry> order,
                      const StepSchedule& schedule, std::size_t t);

/// Seed for the update order of block (q, r) in epoch t (all 1-based).
std::uint64_t block_seed(std::uint64_t seed, std::size_t t, std::size_t q, std::size_t r);

/// In-place seeded permutation.
void shuffle_entries(std::span<OmegaEntry> entries, std::uint64_t seed);

struct SerialRun {
  ModelState state;
  MetricsTrace trace;
};

/// T epochs of serial_dso_epoch over all of Omega, each in the order the
/// single-worker parallel engine would use.
SerialRun train_serial_dso(const SparseDataset& data, const TrainConfig& config,
                           const SparseDataset* test = nullptr);

struct PrimalState {
  std::vector<double> w;
  std::vector<double> adagrad;  // AdaGrad schedule only
};

PrimalState initial_primal_state(const SaddleParams& params, const StepSchedule& schedule);

/// Plain SGD on the regularized risk: |rows| steps w <- w - eta g_i with i
/// drawn uniformly with replacement from `rows` (all examples when empty),
/// projecting onto the w box after each step.
void sgd_baseline_epoch(PrimalState& state, const SaddleParams& params, const StepSchedule& schedule,
                        std::size_t t, std::uint64_t seed, std::span<const Index> rows = {});

struct SgdRun {
  PrimalState state;
  MetricsTrace trace;
};

SgdRun train_sgd(const SparseDataset& data, const TrainConfig& config, const SparseDataset* test = nullptr);

}  // namespace dso

#endif  // DSO_SERIAL_HPP_
