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

#include "dso/serial.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <string>

#include "dso/detail/update_kernel.hpp"
#include "dso/error.hpp"

namespace dso {

std::string_view to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kInvSqrtT: return "sqrt_t";
    case ScheduleKind::kAdaGrad: return "adagrad";
    case ScheduleKind::kLemma2: return "lemma2";
  }
  return "unknown";
}

ScheduleKind parse_schedule_kind(std::string_view name) {
  if (name == "sqrt_t" || name == "inv_sqrt_t") return ScheduleKind::kInvSqrtT;
  if (name == "adagrad") return ScheduleKind::kAdaGrad;
  if (name == "lemma2") return ScheduleKind::kLemma2;
  throw Error(ErrorCode::kInvalidArgument, "unknown schedule '" + std::string(name) + "'");
}

double StepSchedule::epoch_step(std::size_t t) const {
  switch (kind) {
    case ScheduleKind::kInvSqrtT: return eta0 / std::sqrt(static_cast<double>(t));
    case ScheduleKind::kAdaGrad: return eta0;
    case ScheduleKind::kLemma2: return std::sqrt(lemma2_d / (2.0 * lemma2_c * static_cast<double>(t)));
  }
  return 0.0;
}

double step_size(const StepSchedule& schedule, std::size_t t, double accumulated_sq_grad) {
  if (t < 1) throw Error(ErrorCode::kInvalidArgument, "epochs are numbered from 1");
  if (schedule.kind == ScheduleKind::kAdaGrad) {
    return schedule.eta0 / std::sqrt(schedule.epsilon + accumulated_sq_grad);
  }
  return schedule.epoch_step(t);
}

ModelState initial_state(const SaddleParams& params, const StepSchedule& schedule) {
  ModelState state;
  const auto& data = params.data();
  state.w.assign(data.num_features(), 0.0);
  state.alpha.assign(data.num_examples(), params.loss().alpha_box().clamp(0.0));
  if (schedule.adaptive()) {
    state.adagrad_w.assign(data.num_features(), 0.0);
    state.adagrad_alpha.assign(data.num_examples(), 0.0);
  }
  return state;
}

SaddleParams make_params(const SparseDataset& data, const TrainConfig& config) {
  if (config.workers < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one worker");
  const auto& s = config.schedule;
  if (!(s.eta0 > 0.0) && s.kind != ScheduleKind::kLemma2) {
    throw Error(ErrorCode::kInvalidArgument, "eta0 must be positive");
  }
  if (s.kind == ScheduleKind::kLemma2 && !(s.lemma2_d > 0.0 && s.lemma2_c > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lemma2 constants D and C must be positive");
  }
  if (s.kind == ScheduleKind::kAdaGrad && !(s.epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "AdaGrad epsilon must be positive");
  }
  SaddleParams::Options options;
  options.w_bound = config.w_bound;
  return SaddleParams(data, LossModel{config.loss, config.alpha_bound}, config.regularizer, config.lambda, options);
}

void dso_update(ModelState& state, const SaddleParams& params, std::size_t i, std::size_t j, double eta,
                const StepSchedule& schedule) {
  const auto x = params.data().find(i, j);
  if (!x) {
    throw Error(ErrorCode::kIndexNotInOmega,
                "(" + std::to_string(i) + ", " + std::to_string(j) + ") is not a stored nonzero");
  }
  if (schedule.adaptive() && (state.adagrad_w.size() != state.w.size() ||
                              state.adagrad_alpha.size() != state.alpha.size())) {
    throw Error(ErrorCode::kInvalidArgument, "AdaGrad update on a state without accumulators");
  }
  const detail::UpdateKernel kernel(params, schedule);
  double* acc_w = kernel.adaptive() ? &state.adagrad_w[j] : nullptr;
  double* acc_a = kernel.adaptive() ? &state.adagrad_alpha[i] : nullptr;
  kernel.apply(state.w[j], state.alpha[i], acc_w, acc_a, i, j, *x, eta);
}

void serial_dso_epoch(ModelState& state, const SaddleParams& params, std::span<const OmegaEntry> order,
                      const StepSchedule& schedule, std::size_t t) {
  const detail::UpdateKernel kernel(params, schedule);
  const double eta = schedule.epoch_step(t);
  if (kernel.adaptive()) {
    for (const auto& e : order) {
      kernel.apply(state.w[e.j], state.alpha[e.i], &state.adagrad_w[e.j], &state.adagrad_alpha[e.i], e.i, e.j,
                   e.x, eta);
    }
  } else {
    for (const auto& e : order) kernel.apply(state.w[e.j], state.alpha[e.i], nullptr, nullptr, e.i, e.j, e.x, eta);
  }
}

std::uint64_t block_seed(std::uint64_t seed, std::size_t t, std::size_t q, std::size_t r) {
  // splitmix64 finalizer over a running mix of the four inputs.
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(seed);
  h = mix(h ^ static_cast<std::uint64_t>(t));
  h = mix(h ^ static_cast<std::uint64_t>(q));
  h = mix(h ^ static_cast<std::uint64_t>(r));
  return h;
}

void shuffle_entries(std::span<OmegaEntry> entries, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::shuffle(entries.begin(), entries.end(), rng);
}

SerialRun train_serial_dso(const SparseDataset& data, const TrainConfig& config, const SparseDataset* test) {
  const SaddleParams params = make_params(data, config);
  SerialRun run;
  run.state = initial_state(params, config.schedule);
  const auto omega = omega_entries(data);
  std::vector<OmegaEntry> order;
  IterateAverage average;
  double elapsed = 0.0;
  for (std::size_t t = 1; t <= config.epochs; ++t) {
    const auto start = std::chrono::steady_clock::now();
    order.assign(omega.begin(), omega.end());
    if (config.shuffle) shuffle_entries(order, block_seed(config.seed, t, 1, 1));
    serial_dso_epoch(run.state, params, order, config.schedule, t);
    elapsed += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (config.eval_every > 0) {
      average.add(run.state.w, run.state.alpha);
      if (t % config.eval_every == 0 || t == config.epochs) {
        run.trace.epochs.push_back(
            evaluate_epoch(params, test, t, elapsed, run.state.w, run.state.alpha, &average));
      }
    }
  }
  return run;
}

PrimalState initial_primal_state(const SaddleParams& params, const StepSchedule& schedule) {
  PrimalState state;
  state.w.assign(params.data().num_features(), 0.0);
  if (schedule.adaptive()) state.adagrad.assign(params.data().num_features(), 0.0);
  return state;
}

void sgd_baseline_epoch(PrimalState& state, const SaddleParams& params, const StepSchedule& schedule,
                        std::size_t t, std::uint64_t seed, std::span<const Index> rows) {
  const auto& data = params.data();
  const std::size_t n = rows.empty() ? data.num_examples() : rows.size();
  const auto box = params.regularizer().w_box();
  const auto reg = params.regularizer().kind;
  const double lambda = params.lambda();
  const double eta = schedule.epoch_step(t);
  const bool adaptive = schedule.adaptive();
  auto& w = state.w;
  const std::size_t d = w.size();

  auto step = [&](std::size_t j, double g) {
    double eta_j = eta;
    if (adaptive) {
      state.adagrad[j] += g * g;
      eta_j = eta / std::sqrt(schedule.epsilon + state.adagrad[j]);
    }
    w[j] = box.clamp(w[j] - eta_j * g);
  };

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = rows.empty() ? pick(rng) : rows[pick(rng)];
    const double u = data.dot_row(i, w);
    const double dl = loss_derivative(params.loss(), u, params.target(i));
    const auto row = data.row(i);
    if (lambda == 0.0) {
      if (dl == 0.0) continue;
      for (const auto& e : row) step(e.index, dl * e.value);
      continue;
    }
    // Dense regularizer gradient merged with the sparse loss gradient; all
    // reads of w[j] happen before its write.
    std::size_t cursor = 0;
    for (std::size_t j = 0; j < d; ++j) {
      double g = lambda * reg_grad(reg, w[j]);
      if (cursor < row.size() && row[cursor].index == j) {
        g += dl * row[cursor].value;
        ++cursor;
      }
      step(j, g);
    }
  }
}

SgdRun train_sgd(const SparseDataset& data, const TrainConfig& config, const SparseDataset* test) {
  SaddleParams::Options options;
  options.w_bound = config.w_bound;
  options.allow_zero_lambda = true;
  const SaddleParams params(data, LossModel{config.loss, config.alpha_bound}, config.regularizer, config.lambda,
                            options);
  SgdRun run;
  run.state = initial_primal_state(params, config.schedule);
  double elapsed = 0.0;
  for (std::size_t t = 1; t <= config.epochs; ++t) {
    const auto start = std::chrono::steady_clock::now();
    sgd_baseline_epoch(run.state, params, config.schedule, t, block_seed(config.seed, t, 1, 0));
    elapsed += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (config.eval_every > 0 && (t % config.eval_every == 0 || t == config.epochs)) {
      run.trace.epochs.push_back(evaluate_primal_epoch(params, test, t, elapsed, run.state.w));
    }
  }
  return run;
}

}  // namespace dso
