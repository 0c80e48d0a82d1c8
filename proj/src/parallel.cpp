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

#include "dso/parallel.hpp"

#include <atomic>
#include <barrier>
#include <chrono>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <utility>

#include "dso/detail/update_kernel.hpp"
#include "dso/error.hpp"

namespace dso {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// A slice of w that travels between workers together with its accumulators.
struct ColumnBlock {
  std::size_t id = 0;
  std::vector<double> w;
  std::vector<double> acc;
};

// The alpha coordinates of one row block; owned by one worker for the whole run.
struct AlphaBlock {
  std::vector<double> alpha;
  std::vector<double> acc;
};

void check_plan(const SparseDataset& data, const PartitionPlan& plan, const TrainConfig& config) {
  if (plan.total_nnz() != data.nnz()) {
    throw Error(ErrorCode::kInvalidArgument, "partition plan was built for a different dataset");
  }
  if (config.workers != plan.workers() && config.workers != 1) {
    throw Error(ErrorCode::kInvalidArgument, "config.workers disagrees with the partition plan");
  }
  if (plan.workers() > 0xffff) throw Error(ErrorCode::kInvalidArgument, "at most 65535 workers");
}

// Collects the first failure from any lane.
class FailureSlot {
 public:
  void record(std::exception_ptr e, std::string where) {
    std::lock_guard lock(mutex_);
    if (!error_) {
      error_ = std::move(e);
      where_ = std::move(where);
    }
    failed_.store(true, std::memory_order_release);
  }
  bool failed() const { return failed_.load(std::memory_order_acquire); }

  [[noreturn]] void rethrow() const {
    try {
      std::rethrow_exception(error_);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kLogOverflow) throw;
      throw Error(ErrorCode::kWorkerFailure, where_ + ": " + e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kWorkerFailure, where_ + ": " + e.what());
    }
  }

 private:
  std::mutex mutex_;
  std::atomic<bool> failed_{false};
  std::exception_ptr error_;
  std::string where_;
};

}  // namespace

double EpochTimings::mean_epoch_time(std::size_t warmup) const {
  if (warmup >= epoch_s.size()) {
    throw Error(ErrorCode::kInsufficientSamples,
                "warmup of " + std::to_string(warmup) + " epochs leaves no timed epochs out of " +
                    std::to_string(epoch_s.size()));
  }
  const double sum = std::accumulate(epoch_s.begin() + static_cast<std::ptrdiff_t>(warmup), epoch_s.end(), 0.0);
  return sum / static_cast<double>(epoch_s.size() - warmup);
}

DsoRun run_dso(const SparseDataset& data, const PartitionPlan& plan, const TrainConfig& config,
               const SparseDataset* test) {
  check_plan(data, plan, config);
  const SaddleParams params = make_params(data, config);
  const detail::UpdateKernel kernel(params, config.schedule);
  const bool adaptive = kernel.adaptive();
  const std::size_t p = plan.workers();
  const std::size_t epochs = config.epochs;

  // Initial state, scattered into blocks.
  const ModelState init = initial_state(params, config.schedule);
  std::vector<ColumnBlock> held(p);
  std::vector<AlphaBlock> owned(p);
  for (std::size_t q = 0; q < p; ++q) {
    // sigma_1(q) = q: worker q starts with column block q.
    held[q].id = q;
    const auto cols = plan.col_block(q);
    held[q].w.resize(cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) held[q].w[k] = init.w[cols[k]];
    if (adaptive) held[q].acc.assign(cols.size(), 0.0);
    const auto rows = plan.row_block(q);
    owned[q].alpha.resize(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) owned[q].alpha[k] = init.alpha[rows[k]];
    if (adaptive) owned[q].acc.assign(rows.size(), 0.0);
  }

  DsoRun run;
  run.timings.workers = p;
  if (config.log_updates) run.log.emplace();
  std::vector<UpdateLog> worker_logs(p);
  std::vector<double> worker_compute(p, 0.0);
  std::vector<std::size_t> holding_now(p);

  auto assemble = [&](ModelState& state) {
    state.w.assign(data.num_features(), 0.0);
    state.alpha.assign(data.num_examples(), 0.0);
    if (adaptive) {
      state.adagrad_w.assign(data.num_features(), 0.0);
      state.adagrad_alpha.assign(data.num_examples(), 0.0);
    }
    for (const auto& block : held) {
      const auto cols = plan.col_block(block.id);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        state.w[cols[k]] = block.w[k];
        if (adaptive) state.adagrad_w[cols[k]] = block.acc[k];
      }
    }
    for (std::size_t q = 0; q < p; ++q) {
      const auto rows = plan.row_block(q);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        state.alpha[rows[k]] = owned[q].alpha[k];
        if (adaptive) state.adagrad_alpha[rows[k]] = owned[q].acc[k];
      }
    }
  };

  FailureSlot failure;
  IterateAverage average;
  std::size_t phase = 0;  // completed inner iterations
  double elapsed = 0.0;   // training time, evaluation excluded
  Clock::time_point epoch_start = Clock::now();
  Clock::time_point phase_end = epoch_start;

  // Runs on one thread while all workers wait at the barrier: the
  // coordinator of Algorithm 1's exchange step.
  auto on_barrier = [&]() noexcept {
    try {
      const std::size_t t = phase / p + 1;
      const std::size_t r = phase % p + 1;
      const auto exchange_start = Clock::now();
      run.timings.compute_s.push_back(worker_compute);
      run.holdings.push_back(holding_now);

      if (run.log) {
        for (auto& local : worker_logs) {
          if (run.log->size() + local.size() > config.max_log_records) {
            throw Error(ErrorCode::kLogOverflow,
                        "update log exceeds " + std::to_string(config.max_log_records) + " records");
          }
          run.log->insert(run.log->end(), local.begin(), local.end());
          local.clear();
        }
      }

      std::vector<ColumnBlock> next(p);
      for (const auto& [sender, receiver] : exchange_route(r, p)) next[receiver - 1] = std::move(held[sender - 1]);
      held = std::move(next);
      for (std::size_t q = 0; q < p; ++q) {
        if (held[q].id != sigma(r + 1, q + 1, p) - 1) {
          throw Error(ErrorCode::kWorkerFailure, "w block ownership diverged from the rotation schedule");
        }
      }
      phase_end = Clock::now();
      run.timings.exchange_s.push_back(std::chrono::duration<double>(phase_end - exchange_start).count());
      ++phase;

      if (r == p) {
        const double epoch_time = std::chrono::duration<double>(phase_end - epoch_start).count();
        run.timings.epoch_s.push_back(epoch_time);
        elapsed += epoch_time;
        if (config.eval_every > 0) {
          ModelState snapshot;
          assemble(snapshot);
          average.add(snapshot.w, snapshot.alpha);
          if (t % config.eval_every == 0 || t == epochs) {
            run.trace.epochs.push_back(
                evaluate_epoch(params, test, t, elapsed, snapshot.w, snapshot.alpha, &average));
          }
        }
        epoch_start = Clock::now();
      }
    } catch (...) {
      failure.record(std::current_exception(), "coordinator");
    }
  };

  std::barrier sync(static_cast<std::ptrdiff_t>(p), on_barrier);

  auto worker = [&](std::size_t q) {
    std::vector<OmegaEntry> order;
    for (std::size_t t = 1; t <= epochs; ++t) {
      const double eta = config.schedule.epoch_step(t);
      for (std::size_t r = 1; r <= p; ++r) {
        if (!failure.failed()) {
          try {
            const auto start = Clock::now();
            ColumnBlock& wb = held[q];
            AlphaBlock& ab = owned[q];
            holding_now[q] = wb.id;
            const auto block = plan.block(q, wb.id);
            order.assign(block.begin(), block.end());
            if (config.shuffle) shuffle_entries(order, block_seed(config.seed, t, q + 1, r));
            auto& log = worker_logs[q];
            for (const auto& e : order) {
              const std::size_t jl = plan.col_local(e.j);
              const std::size_t il = plan.row_local(e.i);
              kernel.apply(wb.w[jl], ab.alpha[il], adaptive ? &wb.acc[jl] : nullptr,
                           adaptive ? &ab.acc[il] : nullptr, e.i, e.j, e.x, eta);
              if (run.log) {
                log.push_back(UpdateRecord{static_cast<std::uint32_t>(t), static_cast<std::uint16_t>(r),
                                           static_cast<std::uint16_t>(q + 1), e.i, e.j, eta});
              }
            }
            worker_compute[q] = seconds_since(start);
          } catch (...) {
            failure.record(std::current_exception(), "worker " + std::to_string(q + 1));
          }
        }
        sync.arrive_and_wait();
        if (failure.failed()) return;
      }
    }
  };

  {
    std::vector<std::jthread> lanes;
    lanes.reserve(p);
    epoch_start = Clock::now();
    for (std::size_t q = 0; q < p; ++q) lanes.emplace_back(worker, q);
  }
  if (failure.failed()) failure.rethrow();

  assemble(run.state);
  return run;
}

ModelState replay_log(const SparseDataset& data, const TrainConfig& config, std::span<const UpdateRecord> log) {
  const SaddleParams params = make_params(data, config);
  const detail::UpdateKernel kernel(params, config.schedule);
  ModelState state = initial_state(params, config.schedule);
  const bool adaptive = kernel.adaptive();
  for (std::size_t k = 0; k < log.size(); ++k) {
    const auto& rec = log[k];
    const auto x = rec.i < data.num_examples() ? data.find(rec.i, rec.j) : std::nullopt;
    if (!x) {
      throw Error(ErrorCode::kCorruptLog, "record " + std::to_string(k) + " names (" + std::to_string(rec.i) +
                                              ", " + std::to_string(rec.j) + "), which is not in Omega");
    }
    kernel.apply(state.w[rec.j], state.alpha[rec.i], adaptive ? &state.adagrad_w[rec.j] : nullptr,
                 adaptive ? &state.adagrad_alpha[rec.i] : nullptr, rec.i, rec.j, *x, rec.eta);
  }
  return state;
}

PsgdRun run_psgd(const SparseDataset& data, const PartitionPlan& plan, const TrainConfig& config,
                 const SparseDataset* test) {
  check_plan(data, plan, config);
  SaddleParams::Options options;
  options.w_bound = config.w_bound;
  options.allow_zero_lambda = true;
  const SaddleParams params(data, LossModel{config.loss, config.alpha_bound}, config.regularizer, config.lambda,
                            options);
  const std::size_t p = plan.workers();

  PsgdRun run;
  run.state = initial_primal_state(params, config.schedule);
  std::vector<PrimalState> copies(p, run.state);
  FailureSlot failure;
  std::size_t t_done = 0;
  double elapsed = 0.0;
  Clock::time_point epoch_start = Clock::now();

  auto on_barrier = [&]() noexcept {
    try {
      ++t_done;
      // w <- mean of the worker copies, summed in worker order.
      auto& w = run.state.w;
      for (std::size_t j = 0; j < w.size(); ++j) {
        double sum = 0.0;
        for (const auto& c : copies) sum += c.w[j];
        w[j] = sum / static_cast<double>(p);
      }
      for (auto& c : copies) c.w = w;
      elapsed += seconds_since(epoch_start);
      if (config.eval_every > 0 && (t_done % config.eval_every == 0 || t_done == config.epochs)) {
        run.trace.epochs.push_back(evaluate_primal_epoch(params, test, t_done, elapsed, w));
      }
      epoch_start = Clock::now();
    } catch (...) {
      failure.record(std::current_exception(), "coordinator");
    }
  };
  std::barrier sync(static_cast<std::ptrdiff_t>(p), on_barrier);

  auto worker = [&](std::size_t q) {
    for (std::size_t t = 1; t <= config.epochs; ++t) {
      if (!failure.failed()) {
        try {
          sgd_baseline_epoch(copies[q], params, config.schedule, t, block_seed(config.seed, t, q + 1, 0),
                             plan.row_block(q));
        } catch (...) {
          failure.record(std::current_exception(), "worker " + std::to_string(q + 1));
        }
      }
      sync.arrive_and_wait();
      if (failure.failed()) return;
    }
  };

  {
    std::vector<std::jthread> lanes;
    lanes.reserve(p);
    epoch_start = Clock::now();
    for (std::size_t q = 0; q < p; ++q) lanes.emplace_back(worker, q);
  }
  if (failure.failed()) failure.rethrow();
  // Worker-local AdaGrad accumulators are not averaged; report worker 1's.
  if (!copies.empty()) run.state.adagrad = copies.front().adagrad;
  return run;
}

EpochTimings measure_epoch_times(const SparseDataset& data, const PartitionPlan& plan, const TrainConfig& config,
                                 std::size_t warmup) {
  if (warmup >= config.epochs) {
    throw Error(ErrorCode::kInsufficientSamples,
                "warmup of " + std::to_string(warmup) + " epochs leaves nothing of " +
                    std::to_string(config.epochs) + " to time");
  }
  TrainConfig timed = config;
  timed.eval_every = 0;
  timed.log_updates = false;
  return run_dso(data, plan, timed).timings;
}

}  // namespace dso
