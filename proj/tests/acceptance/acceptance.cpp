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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Run a single criterion with `--only N`.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dso/dataset.hpp"
#include "dso/metrics.hpp"
#include "dso/objective.hpp"
#include "dso/parallel.hpp"
#include "dso/partition.hpp"
#include "dso/serial.hpp"
#include "dso/synthetic.hpp"
#include "fixtures.hpp"

namespace {

using namespace dso;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

bool same_bits(const ModelState& a, const ModelState& b) {
  return same_bits(a.w, b.w) && same_bits(a.alpha, b.alpha) && same_bits(a.adagrad_w, b.adagrad_w) &&
         same_bits(a.adagrad_alpha, b.adagrad_alpha);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

Outcome serializability() {
  std::size_t runs = 0;
  std::size_t exact = 0;
  for (std::size_t p = 1; p <= 4; ++p) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto data = fold_labels(testing::fixture_64x32(seed));
      TrainConfig config;
      config.lambda = 0.01;
      config.epochs = 5;
      config.workers = p;
      config.seed = seed;
      config.log_updates = true;
      const auto run = run_dso(data, make_partition(data, p), config);
      ++runs;
      if (same_bits(replay_log(data, config, *run.log), run.state)) ++exact;
    }
  }
  return {exact == runs, std::to_string(exact) + "/" + std::to_string(runs) + " replays bit-exact"};
}

Outcome gap_rate() {
  const auto data = fold_labels(make_synthetic({512, 64, 0.2, 2026, 0.0}));
  TrainConfig config;
  config.lambda = 1e-2;
  config.loss = LossKind::kHinge;
  config.regularizer = RegularizerKind::kL2;
  config.schedule.kind = ScheduleKind::kInvSqrtT;
  config.schedule.eta0 = 100.0;
  config.epochs = 256;
  config.eval_every = 1;
  config.seed = 1;
  const auto run = train_serial_dso(data, config);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double n = 0;
  std::ostringstream gaps;
  for (std::size_t t = 8; t <= 256; t *= 2) {
    const double gap = *run.trace.epochs[t - 1].avg_gap;
    gaps << (t == 8 ? "" : ",") << fmt("%.3g", gap);
    const double x = std::log(static_cast<double>(t));
    const double y = std::log(gap);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    n += 1;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope <= -0.35, "log-log slope " + fmt("%.3f", slope) + " (<= -0.35), averaged gaps " + gaps.str()};
}

// Gradient of f written out densely: d f / d w_j and d f / d alpha_i.
void dense_saddle_gradient(const testing::DenseProblem& pr, LossKind loss, RegularizerKind reg, double lambda,
                           const std::vector<double>& w, const std::vector<double>& a, std::vector<double>& gw,
                           std::vector<double>& ga) {
  const double m = static_cast<double>(pr.m);
  gw.assign(pr.d, 0.0);
  ga.assign(pr.m, 0.0);
  for (std::size_t j = 0; j < pr.d; ++j) {
    const double dphi = reg == RegularizerKind::kL2 ? w[j] : (w[j] > 0 ? 1.0 : (w[j] < 0 ? -1.0 : 0.0));
    gw[j] = lambda * dphi;
    for (std::size_t i = 0; i < pr.m; ++i) gw[j] -= a[i] * pr.x[i][j] / m;
  }
  for (std::size_t i = 0; i < pr.m; ++i) {
    double u = 0.0;
    for (std::size_t j = 0; j < pr.d; ++j) u += pr.x[i][j] * w[j];
    // derivative of the conjugate at -alpha_i
    double dconj = 0.0;
    switch (loss) {
      case LossKind::kHinge: dconj = 1.0; break;
      case LossKind::kLogistic: dconj = std::log((1.0 - a[i]) / a[i]); break;
      case LossKind::kSquared: dconj = pr.y[i] - a[i]; break;
    }
    ga[i] = (dconj - u) / m;
  }
}

Outcome unbiasedness() {
  const auto raw = testing::fixture_4x3();
  const auto folded = fold_labels(raw);
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  std::size_t states = 0;
  for (auto loss : {LossKind::kHinge, LossKind::kLogistic, LossKind::kSquared}) {
    for (auto reg : {RegularizerKind::kL2, RegularizerKind::kL1}) {
      const auto& data = loss == LossKind::kSquared ? raw : folded;
      const auto dense = testing::to_dense(data);
      const SaddleParams params(data, {loss}, reg, 0.3, {.w_bound = 3.0});
      const auto omega = omega_entries(data);
      const auto box = params.loss().alpha_box();
      for (int k = 0; k < 20; ++k) {
        std::uniform_real_distribution<double> wd(-3.0, 3.0);
        std::uniform_real_distribution<double> ad(std::max(box.lo, -5.0) + 1e-3, std::min(box.hi, 5.0) - 1e-3);
        std::vector<double> w(data.num_features());
        std::vector<double> a(data.num_examples());
        for (double& v : w) v = wd(rng);
        for (double& v : a) v = ad(rng);
        std::vector<double> mean_w(w.size(), 0.0);
        std::vector<double> mean_a(a.size(), 0.0);
        for (const auto& e : omega) {
          const auto g = stochastic_gradient(params, w, a, e.i, e.j);
          mean_w[e.j] += g.w_component / static_cast<double>(omega.size());
          mean_a[e.i] += g.alpha_component / static_cast<double>(omega.size());
        }
        std::vector<double> gw, ga;
        dense_saddle_gradient(dense, loss, reg, 0.3, w, a, gw, ga);
        for (std::size_t j = 0; j < w.size(); ++j) worst = std::max(worst, std::abs(mean_w[j] - gw[j]));
        for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(mean_a[i] - ga[i]));
        ++states;
      }
    }
  }
  return {worst <= 1e-12, std::to_string(states) + " states, max deviation " + fmt("%.2e", worst) + " (<= 1e-12)"};
}

Outcome conjugates() {
  std::mt19937_64 rng(77);
  double worst_grid = 0.0;
  double worst_fd = 0.0;
  for (auto kind : {LossKind::kHinge, LossKind::kLogistic, LossKind::kSquared}) {
    const LossModel loss{kind};
    for (int k = 0; k < 100; ++k) {
      double alpha = 0.0;
      double y = 1.0;
      switch (kind) {
        case LossKind::kHinge: alpha = std::uniform_real_distribution<double>(0.0, 1.0)(rng); break;
        // Keep the maximizing u inside the [-50, 50] grid.
        case LossKind::kLogistic: alpha = std::uniform_real_distribution<double>(0.01, 0.99)(rng); break;
        case LossKind::kSquared:
          alpha = std::uniform_real_distribution<double>(-10.0, 10.0)(rng);
          y = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
          break;
      }
      const double closed = conjugate_value(loss, alpha, y);
      const double grid = testing::grid_conjugate(kind, alpha, y, -50.0, 50.0, 1e-3);
      worst_grid = std::max(worst_grid, std::abs(closed - grid));

      // Interior points for the central difference.
      const double h = 1e-6;
      const double a = kind == LossKind::kHinge ? std::clamp(alpha, 2 * h, 1 - 2 * h) : alpha;
      const double fd = -(conjugate_value(loss, a + h, y) - conjugate_value(loss, a - h, y)) / (2 * h);
      const double g = conjugate_grad(loss, a, y).value;
      const double rel = std::abs(fd - g) / std::max(std::abs(g), 1e-6);
      worst_fd = std::max(worst_fd, rel);
    }
  }
  return {worst_grid <= 1e-6 && worst_fd < 1e-5,
          "300 points, max |closed - grid| " + fmt("%.2e", worst_grid) + " (<= 1e-6), max FD rel err " +
              fmt("%.2e", worst_fd) + " (< 1e-5)"};
}

Outcome psgd_inferiority() {
  const auto data = fold_labels(testing::heterogeneous_shards(500, 1));
  const auto plan = make_partition(data, 2, PartitionStrategy::kContiguous);
  TrainConfig config;
  config.lambda = 1e-3;
  config.epochs = 50;
  config.workers = 2;
  config.seed = 1;
  config.schedule.kind = ScheduleKind::kInvSqrtT;
  const auto params = make_params(data, config);
  double best_dso = std::numeric_limits<double>::infinity();
  double best_psgd = std::numeric_limits<double>::infinity();
  double eta_dso = 0.0;
  double eta_psgd = 0.0;
  for (double eta0 : {0.1, 1.0, 10.0}) {
    config.schedule.eta0 = eta0;
    const double d = primal_objective(params, run_dso(data, plan, config).state.w);
    const double s = primal_objective(params, run_psgd(data, plan, config).state.w);
    if (d < best_dso) best_dso = d, eta_dso = eta0;
    if (s < best_psgd) best_psgd = s, eta_psgd = eta0;
  }
  return {best_dso < best_psgd, "final primal DSO " + fmt("%.5f", best_dso) + " (eta0 " + fmt("%g", eta_dso) +
                                    ") vs PSGD " + fmt("%.5f", best_psgd) + " (eta0 " + fmt("%g", eta_psgd) + ")"};
}

Outcome scaling_law() {
  const auto data = fold_labels(make_synthetic({200000, 1000, 0.01, 6, 0.0}));
  TrainConfig config;
  config.lambda = 1e-4;
  config.epochs = 9;  // one warmup epoch, eight timed
  std::vector<ScalingSample> samples;
  std::ostringstream times;
  for (std::size_t p : {1, 2, 4}) {
    config.workers = p;
    const auto timings = measure_epoch_times(data, make_partition(data, p), config, 1);
    samples.push_back({static_cast<double>(p), timings.mean_epoch_time(1)});
    times << (p == 1 ? "" : ", ") << "t(" << p << ")=" << fmt("%.4f", samples.back().epoch_time);
  }
  const auto model = fit_scaling_model(samples);
  // With fewer hardware threads than workers the lanes time-share one core
  // and any trend in t(p) comes from cache effects, so the fit says nothing
  // about the scaling law.
  const unsigned threads = std::thread::hardware_concurrency();
  const bool enough_cores = threads >= 4;
  const bool measured_ok = enough_cores && model.r_squared >= 0.9;

  const std::vector<ScalingSample> figure{{1, 54.43695}, {2, 36.4735}};
  const auto published = fit_scaling_model(figure);
  const bool figure_ok = std::abs(published.a - 35.927) <= 1e-3 && std::abs(published.b - 18.510) <= 1e-3;

  std::ostringstream detail;
  detail << "nnz " << data.nnz() << ", " << times.str() << ", A=" << fmt("%.4f", model.a)
         << " B=" << fmt("%.4f", model.b) << " R^2=" << fmt("%.3f", model.r_squared) << " (>= 0.9) on " << threads
         << " hardware threads" << (enough_cores ? "" : " (needs >= 4, measurement not meaningful)")
         << "; two-point fit A=" << fmt("%.4f", published.a)
         << " B=" << fmt("%.5f", published.b) << (figure_ok ? " ok" : " off");
  return {measured_ok && figure_ok, detail.str()};
}

Outcome single_worker_equivalence() {
  std::size_t equal = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto data = fold_labels(testing::fixture_64x32(seed + 100));
    TrainConfig config;
    config.lambda = 0.01;
    config.epochs = 5;
    config.seed = seed;
    config.schedule.kind = seed % 2 ? ScheduleKind::kAdaGrad : ScheduleKind::kInvSqrtT;
    const auto parallel = run_dso(data, make_partition(data, 1), config);
    const auto serial = train_serial_dso(data, config);
    if (same_bits(parallel.state, serial.state)) ++equal;
  }
  return {equal == 10, std::to_string(equal) + "/10 seeds bit-identical"};
}

Outcome feasibility_and_weak_duality() {
  std::mt19937_64 rng(8);
  const auto raw = make_synthetic({60, 20, 0.2, 13, 0.1});
  const auto folded = fold_labels(raw);
  const auto omega_raw = omega_entries(raw);
  const auto omega_folded = omega_entries(folded);
  std::size_t violations = 0;
  std::size_t updates = 0;
  const LossKind losses[] = {LossKind::kHinge, LossKind::kLogistic, LossKind::kSquared};
  const RegularizerKind regs[] = {RegularizerKind::kL2, RegularizerKind::kL1};
  std::uniform_real_distribution<double> log_eta(-3.0, 3.0);
  for (int config_id = 0; config_id < 12; ++config_id) {
    const LossKind loss = losses[config_id % 3];
    const RegularizerKind reg = regs[(config_id / 3) % 2];
    const StepSchedule schedule{config_id >= 6 ? ScheduleKind::kAdaGrad : ScheduleKind::kInvSqrtT};
    const auto& data = loss == LossKind::kSquared ? raw : folded;
    const auto& omega = loss == LossKind::kSquared ? omega_raw : omega_folded;
    const SaddleParams params(data, {loss}, reg, 0.05);
    const auto wb = params.regularizer().w_box();
    const auto ab = params.loss().alpha_box();
    ModelState state = initial_state(params, schedule);
    const int count = config_id < 4 ? 8334 : 8333;
    for (int k = 0; k < count; ++k) {
      const auto& e = omega[rng() % omega.size()];
      dso_update(state, params, e.i, e.j, std::pow(10.0, log_eta(rng)), schedule);
      ++updates;
      if (!wb.contains(state.w[e.j]) || !ab.contains(state.alpha[e.i])) ++violations;
    }
  }

  std::size_t pairs = 0;
  std::size_t inverted = 0;
  for (int k = 0; k < 1000; ++k) {
    const LossKind loss = losses[k % 3];
    const RegularizerKind reg = regs[(k / 3) % 2];
    const auto& data = loss == LossKind::kSquared ? raw : folded;
    const SaddleParams params(data, {loss}, reg, 0.05);
    const auto wb = params.regularizer().w_box();
    const auto ab = params.loss().alpha_box();
    std::uniform_real_distribution<double> wd(wb.lo, wb.hi);
    std::uniform_real_distribution<double> ad(ab.lo, ab.hi);
    std::vector<double> w(data.num_features());
    std::vector<double> a(data.num_examples());
    for (double& v : w) v = wd(rng);
    for (double& v : a) v = ad(rng);
    ++pairs;
    if (dual_objective(params, a) > primal_objective(params, w)) ++inverted;
  }
  return {violations == 0 && inverted == 0 && updates == 100000,
          std::to_string(updates) + " fuzzed updates, " + std::to_string(violations) + " box violations; " +
              std::to_string(pairs) + " feasible pairs, " + std::to_string(inverted) + " with dual > primal"};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int k = 1; k + 1 < argc; ++k) {
    if (std::string(argv[k]) == "--only") only = std::atoi(argv[k + 1]);
  }
  const std::vector<Criterion> criteria{
      {1, "serializability: replay reproduces parallel runs", 10.0, serializability},
      {2, "averaged duality gap decays at rate T^-0.35 or faster", 60.0, gap_rate},
      {3, "stochastic gradient is unbiased", 1.0, unbiasedness},
      {4, "closed-form conjugates and gradients", 5.0, conjugates},
      {5, "DSO beats PSGD on heterogeneous shards", 30.0, psgd_inferiority},
      {6, "epoch time follows A/p + B", 120.0, scaling_law},
      {7, "p=1 engine equals the serial engine", 5.0, single_worker_equivalence},
      {8, "box feasibility and weak duality", 10.0, feasibility_and_weak_duality},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = elapsed < c.limit_s;
    const bool pass = outcome.pass && in_time;
    if (!pass) ++failed;
    std::printf("criterion %d: %s - %s; %s; %.2f s (limit %.0f s%s)\n", c.id, pass ? "PASS" : "FAIL", c.name,
                outcome.detail.c_str(), elapsed, c.limit_s, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
