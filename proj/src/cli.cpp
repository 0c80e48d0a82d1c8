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

#include "dso/cli.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>

#include "CLI11.hpp"
#include "dso/checkpoint.hpp"
#include "dso/dataset.hpp"
#include "dso/error.hpp"
#include "dso/metrics.hpp"
#include "dso/objective.hpp"
#include "dso/parallel.hpp"
#include "dso/partition.hpp"
#include "dso/serial.hpp"
#include "dso/synthetic.hpp"
#include "dso/update_log.hpp"
#include "json.hpp"

namespace dso {
namespace {

using json = nlohmann::ordered_json;

struct TrainOptions {
  std::string data;
  std::string test;
  std::string loss = "hinge";
  std::string reg = "l2";
  std::string schedule = "sqrt_t";
  std::string balance = "contiguous";
  double lambda = 1e-3;
  double eta0 = 1.0;
  double balpha = kDefaultAlphaBound;
  double adagrad_eps = 1e-8;
  double lemma2_d = 1.0;
  double lemma2_c = 1.0;
  std::optional<double> wbound;
  std::size_t epochs = 10;
  std::size_t workers = 1;
  std::size_t eval_every = 0;
  std::uint64_t seed = 0;
  bool no_shuffle = false;
  std::string trace;
  std::string model;
  std::string log;
  std::string plan_json;
  std::size_t max_log_records = std::numeric_limits<std::size_t>::max();
};

void add_train_options(CLI::App* cmd, TrainOptions& o, bool saddle) {
  cmd->add_option("--data", o.data, "Training data in LIBSVM format")->required()->check(CLI::ExistingFile);
  cmd->add_option("--test", o.test, "Test data in LIBSVM format")->check(CLI::ExistingFile);
  cmd->add_option("--loss", o.loss, "Loss function")
      ->check(CLI::IsMember({"hinge", "logistic", "squared"}))
      ->capture_default_str();
  cmd->add_option("--reg", o.reg, "Regularizer")->check(CLI::IsMember({"l1", "l2"}))->capture_default_str();
  cmd->add_option("--lambda", o.lambda, "Regularization weight")->capture_default_str();
  cmd->add_option("--eta0", o.eta0, "Initial step size")->capture_default_str();
  cmd->add_option("--schedule", o.schedule, "Step-size schedule")
      ->check(CLI::IsMember({"sqrt_t", "adagrad", "lemma2"}))
      ->capture_default_str();
  cmd->add_option("--adagrad-eps", o.adagrad_eps, "AdaGrad epsilon")->capture_default_str();
  cmd->add_option("--lemma2-d", o.lemma2_d, "D of the lemma2 schedule sqrt(D / 2Ct)")->capture_default_str();
  cmd->add_option("--lemma2-c", o.lemma2_c, "C of the lemma2 schedule sqrt(D / 2Ct)")->capture_default_str();
  cmd->add_option("--wbound", o.wbound, "Clipping radius W for w (default depends on loss and regularizer)");
  cmd->add_option("--epochs", o.epochs, "Number of epochs T")->capture_default_str();
  cmd->add_option("--workers", o.workers, "Number of workers p")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  cmd->add_option("--balance", o.balance, "Partition strategy")
      ->check(CLI::IsMember({"contiguous", "greedy"}))
      ->capture_default_str();
  cmd->add_option("--trace", o.trace, "Write a JSONL metrics trace here");
  cmd->add_option("--eval-every", o.eval_every, "Trace cadence in epochs (default 1 when --trace or --test is set)");
  cmd->add_option("--model", o.model, "Write the binary model checkpoint here");
  cmd->add_flag("--no-shuffle", o.no_shuffle, "Keep (i, j) order inside blocks instead of reshuffling each epoch");
  if (saddle) {
    cmd->add_option("--balpha", o.balpha, "Dual box half-width for the squared loss")->capture_default_str();
    cmd->add_option("--log-updates", o.log, "Record every update and write the log here");
    cmd->add_option("--max-log-records", o.max_log_records, "Abort if the update log grows beyond this");
    cmd->add_option("--plan-json", o.plan_json, "Write the partition summary (block nnz matrix) here");
  }
}

TrainConfig to_config(const TrainOptions& o) {
  if (o.epochs < 1) throw Error(ErrorCode::kInvalidArgument, "--epochs must be at least 1");
  TrainConfig c;
  c.lambda = o.lambda;
  c.loss = parse_loss_kind(o.loss);
  c.regularizer = parse_regularizer_kind(o.reg);
  c.schedule.kind = parse_schedule_kind(o.schedule);
  c.schedule.eta0 = o.eta0;
  c.schedule.epsilon = o.adagrad_eps;
  c.schedule.lemma2_d = o.lemma2_d;
  c.schedule.lemma2_c = o.lemma2_c;
  c.epochs = o.epochs;
  c.seed = o.seed;
  c.workers = o.workers;
  c.alpha_bound = o.balpha;
  c.w_bound = o.wbound;
  c.partition = parse_partition_strategy(o.balance);
  c.shuffle = !o.no_shuffle;
  c.eval_every = o.eval_every;
  if (c.eval_every == 0 && (!o.trace.empty() || !o.test.empty())) c.eval_every = 1;
  c.log_updates = !o.log.empty();
  c.max_log_records = o.max_log_records;
  return c;
}

// Classification losses train on folded data; the squared loss keeps targets.
SparseDataset load_training(const std::string& path, LossKind loss) {
  ParseOptions opts;
  opts.mode = loss == LossKind::kSquared ? LabelMode::kRegression : LabelMode::kClassification;
  auto data = read_libsvm_file(path, opts);
  return loss == LossKind::kSquared ? data : fold_labels(data);
}

SparseDataset load_test(const std::string& path, LossKind loss, std::size_t train_features) {
  ParseOptions opts;
  opts.mode = loss == LossKind::kSquared ? LabelMode::kRegression : LabelMode::kClassification;
  opts.min_features = train_features;
  return read_libsvm_file(path, opts);
}

void write_trace(const std::string& path, const MetricsTrace& trace) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path + " for writing");
  trace.write_jsonl(out);
}

int run_train(const TrainOptions& o, std::ostream& out) {
  const TrainConfig config = to_config(o);
  const auto data = load_training(o.data, config.loss);
  std::optional<SparseDataset> test;
  if (!o.test.empty()) test = load_test(o.test, config.loss, data.num_features());
  const auto plan = make_partition(data, config.workers, config.partition);
  if (!o.plan_json.empty()) {
    std::ofstream pj(o.plan_json, std::ios::trunc);
    if (!pj) throw Error(ErrorCode::kIo, "cannot open " + o.plan_json + " for writing");
    pj << plan_to_json(plan) << '\n';
  }

  const auto run = run_dso(data, plan, config, test ? &*test : nullptr);
  const SaddleParams params = make_params(data, config);

  if (!o.trace.empty()) write_trace(o.trace, run.trace);
  if (!o.model.empty()) save_checkpoint(o.model, make_checkpoint(params, config.schedule, run.state.w, run.state.alpha));
  if (run.log) save_update_log(o.log, *run.log);

  json summary;
  summary["method"] = "dso";
  summary["epochs"] = config.epochs;
  summary["workers"] = config.workers;
  summary["train_time_s"] =
      std::accumulate(run.timings.epoch_s.begin(), run.timings.epoch_s.end(), 0.0);
  summary["primal"] = primal_objective(params, run.state.w);
  summary["dual"] = dual_objective(params, run.state.alpha);
  summary["gap"] = duality_gap(params, run.state.w, run.state.alpha);
  if (test) summary["test_error"] = eval_test_error(run.state.w, *test);
  if (run.log) summary["log_records"] = run.log->size();
  out << summary.dump() << '\n';
  return kExitOk;
}

int run_psgd_train(const TrainOptions& o, std::ostream& out) {
  const TrainConfig config = to_config(o);
  const auto data = load_training(o.data, config.loss);
  std::optional<SparseDataset> test;
  if (!o.test.empty()) test = load_test(o.test, config.loss, data.num_features());
  const auto plan = make_partition(data, config.workers, config.partition);
  const auto run = run_psgd(data, plan, config, test ? &*test : nullptr);

  SaddleParams::Options options;
  options.w_bound = config.w_bound;
  options.allow_zero_lambda = true;
  const SaddleParams params(data, LossModel{config.loss, config.alpha_bound}, config.regularizer, config.lambda,
                            options);
  if (!o.trace.empty()) write_trace(o.trace, run.trace);
  if (!o.model.empty()) {
    // PSGD has no dual iterate; store the loss-derivative response to w so
    // the checkpoint still carries a feasible alpha.
    std::vector<double> alpha(data.num_examples());
    const auto box = params.loss().alpha_box();
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      alpha[i] = box.clamp(-loss_derivative(params.loss(), data.dot_row(i, run.state.w), params.target(i)));
    }
    save_checkpoint(o.model, make_checkpoint(params, config.schedule, run.state.w, std::move(alpha)));
  }

  json summary;
  summary["method"] = "psgd";
  summary["epochs"] = config.epochs;
  summary["workers"] = config.workers;
  summary["primal"] = primal_objective(params, run.state.w);
  if (test) summary["test_error"] = eval_test_error(run.state.w, *test);
  out << summary.dump() << '\n';
  return kExitOk;
}

bool bit_equal(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::bit_cast<std::uint64_t>(a[k]) != std::bit_cast<std::uint64_t>(b[k])) return false;
  }
  return true;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

struct ReplayOptions {
  std::string data;
  std::string log;
  std::string model;
  double adagrad_eps = 1e-8;
};

int run_replay(const ReplayOptions& o, std::ostream& out) {
  const auto expected = load_checkpoint(o.model);
  const auto& h = expected.header;
  TrainConfig config;
  config.lambda = h.lambda;
  config.loss = h.loss;
  config.regularizer = h.regularizer;
  config.alpha_bound = h.alpha_bound;
  config.w_bound = h.w_bound;
  config.schedule.kind = h.schedule;
  config.schedule.epsilon = o.adagrad_eps;
  const auto data = load_training(o.data, config.loss);
  if (data.num_examples() != h.m || data.num_features() != h.d) {
    throw Error(ErrorCode::kInvalidArgument, "model dimensions do not match the data");
  }
  const auto log = load_update_log(o.log);
  const auto state = replay_log(data, config, log);
  const bool match = bit_equal(state.w, expected.w) && bit_equal(state.alpha, expected.alpha);

  json report;
  report["records"] = log.size();
  report["bit_exact"] = match;
  report["max_abs_diff_w"] = max_abs_diff(state.w, expected.w);
  report["max_abs_diff_alpha"] = max_abs_diff(state.alpha, expected.alpha);
  out << report.dump() << '\n';
  return match ? kExitOk : kExitVerification;
}

struct EvalOptions {
  std::string model;
  std::string test;
  std::string data;
};

int run_eval(const EvalOptions& o, std::ostream& out, std::ostream& err) {
  const auto model = load_checkpoint(o.model);
  const auto& h = model.header;
  ParseOptions opts;
  opts.mode = h.loss == LossKind::kSquared ? LabelMode::kRegression : LabelMode::kClassification;
  const auto test = read_libsvm_file(o.test, opts);

  EvalReport report;
  report.examples = test.num_examples();
  for (double y : test.raw_labels()) (y > 0 ? report.positives : report.negatives)++;
  if (test.num_features() > h.d) {
    report.ignored_features = test.num_features() - h.d;
    err << "warning: test data has " << test.num_features() << " features, model has " << h.d
        << "; the extra features are ignored\n";
  }
  report.test_error = eval_test_error(model.w, test);
  try {
    report.auprc = eval_auprc(model.w, test);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSingleClass) throw;
    err << "warning: " << e.what() << '\n';
  }

  SaddleParams::Options options;
  options.w_bound = h.w_bound;
  options.allow_zero_lambda = true;
  const LossModel loss{h.loss, h.alpha_bound};
  {
    const auto scored = h.loss == LossKind::kSquared ? test : fold_labels(test);
    const SaddleParams test_params(scored, loss, h.regularizer, h.lambda, options);
    report.primal = primal_objective(test_params, model.w);
  }
  if (!o.data.empty()) {
    const auto train = load_training(o.data, h.loss);
    if (train.num_examples() != h.m || train.num_features() != h.d) {
      throw Error(ErrorCode::kInvalidArgument, "model dimensions do not match the training data");
    }
    const SaddleParams params(train, loss, h.regularizer, h.lambda, options);
    report.primal = primal_objective(params, model.w);
    report.dual = dual_objective(params, model.alpha);
    report.gap = duality_gap(params, model.w, model.alpha);
  }
  out << to_json(report) << '\n';
  return kExitOk;
}

struct ScaleOptions {
  TrainOptions train;
  std::vector<std::size_t> workers_list{1, 2, 4};
  std::size_t warmup = 1;
};

int run_scale(ScaleOptions& o, std::ostream& out) {
  TrainConfig config = to_config(o.train);
  config.eval_every = 0;
  const auto data = load_training(o.train.data, config.loss);
  std::vector<ScalingSample> samples;
  for (std::size_t p : o.workers_list) {
    config.workers = p;
    const auto plan = make_partition(data, p, config.partition);
    const auto timings = measure_epoch_times(data, plan, config, o.warmup);
    samples.push_back({static_cast<double>(p), timings.mean_epoch_time(o.warmup)});
  }
  const auto model = fit_scaling_model(samples);
  std::vector<double> predict_at;
  for (const auto& s : samples) predict_at.push_back(s.workers);
  const double top = *std::max_element(predict_at.begin(), predict_at.end());
  predict_at.push_back(2 * top);
  predict_at.push_back(4 * top);
  out << scaling_to_json(model, samples, predict_at) << '\n';
  return kExitOk;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kIo:
    case ErrorCode::kEmptyDataset:
    case ErrorCode::kParse:
    case ErrorCode::kDuplicateFeature:
    case ErrorCode::kNonFinite:
    case ErrorCode::kAlreadyFolded:
    case ErrorCode::kFoldRequiresBinaryLabels:
    case ErrorCode::kIndexNotInOmega:
    case ErrorCode::kCorruptLog:
    case ErrorCode::kSingleClass:
    case ErrorCode::kInconsistentGap:
    case ErrorCode::kWorkerFailure:
      return kExitData;
    default:
      return kExitUsage;
  }
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distributed stochastic saddle-point training for regularized risk minimization", "dso"};
  app.require_subcommand(1);

  TrainOptions train_opts;
  auto* train = app.add_subcommand("train", "Train with the parallel saddle-point engine");
  add_train_options(train, train_opts, true);

  TrainOptions psgd_opts;
  auto* psgd = app.add_subcommand("psgd-train", "Train the parameter-averaging SGD baseline");
  add_train_options(psgd, psgd_opts, false);

  ReplayOptions replay_opts;
  auto* replay = app.add_subcommand("replay", "Serially replay an update log and compare with a model");
  replay->add_option("--data", replay_opts.data, "Training data")->required()->check(CLI::ExistingFile);
  replay->add_option("--log", replay_opts.log, "Update log from train --log-updates")->required()->check(CLI::ExistingFile);
  replay->add_option("--model-expected", replay_opts.model, "Checkpoint written by the logged run")
      ->required()
      ->check(CLI::ExistingFile);
  replay->add_option("--adagrad-eps", replay_opts.adagrad_eps, "AdaGrad epsilon used by the run")->capture_default_str();

  EvalOptions eval_opts;
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a test set");
  eval->add_option("--model", eval_opts.model, "Model checkpoint")->required()->check(CLI::ExistingFile);
  eval->add_option("--test", eval_opts.test, "Test data")->required()->check(CLI::ExistingFile);
  eval->add_option("--data", eval_opts.data, "Training data, to report the dual objective and gap")
      ->check(CLI::ExistingFile);

  ScaleOptions scale_opts;
  scale_opts.train.epochs = 4;
  auto* scale = app.add_subcommand("scale", "Time epochs for several worker counts and fit t(p) = A/p + B");
  add_train_options(scale, scale_opts.train, false);
  scale->add_option("--workers-list", scale_opts.workers_list, "Comma-separated worker counts")
      ->delimiter(',')
      ->capture_default_str();
  scale->add_option("--warmup", scale_opts.warmup, "Untimed leading epochs")->capture_default_str();

  std::string stats_data;
  bool stats_regression = false;
  auto* stats = app.add_subcommand("stats", "Print dataset statistics as JSON");
  stats->add_option("--data", stats_data, "LIBSVM file")->required()->check(CLI::ExistingFile);
  stats->add_flag("--regression", stats_regression, "Read labels as real-valued targets");

  SyntheticSpec synth_spec;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write a random linearly separable dataset in LIBSVM format");
  synth->add_option("--m", synth_spec.examples, "Examples")->capture_default_str();
  synth->add_option("--d", synth_spec.features, "Features")->capture_default_str();
  synth->add_option("--density", synth_spec.density, "Expected fraction of nonzeros")->capture_default_str();
  synth->add_option("--noise", synth_spec.label_noise, "Label flip probability")->capture_default_str();
  synth->add_option("--seed", synth_spec.seed, "Random seed")->capture_default_str();
  synth->add_option("--out", synth_out, "Output file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train) return run_train(train_opts, out);
    if (*psgd) return run_psgd_train(psgd_opts, out);
    if (*replay) return run_replay(replay_opts, out);
    if (*eval) return run_eval(eval_opts, out, err);
    if (*scale) return run_scale(scale_opts, out);
    if (*stats) {
      ParseOptions opts;
      opts.mode = stats_regression ? LabelMode::kRegression : LabelMode::kClassification;
      out << stats_to_json(dataset_stats(read_libsvm_file(stats_data, opts))) << '\n';
      return kExitOk;
    }
    if (*synth) {
      std::ofstream file(synth_out, std::ios::trunc);
      if (!file) throw Error(ErrorCode::kIo, "cannot open " + synth_out + " for writing");
      write_libsvm(file, make_synthetic(synth_spec));
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "dso: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "dso: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

int cli_main(int argc, char** argv) {
  return cli_main(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace dso
