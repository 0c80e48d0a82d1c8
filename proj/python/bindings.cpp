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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>

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

PYBIND11_MAKE_OPAQUE(dso::UpdateLog)

namespace py = pybind11;
using namespace dso;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const std::vector<double>& v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw Error(ErrorCode::kInvalidArgument, "expected a 1-d array");
  return {a.data(), a.data() + a.size()};
}

LabelMode mode_of(bool regression) { return regression ? LabelMode::kRegression : LabelMode::kClassification; }

py::dict trace_to_py(const MetricsTrace& trace) {
  py::list epochs;
  auto opt = [](const std::optional<double>& v) -> py::object { return v ? py::object(py::float_(*v)) : py::object(py::none()); };
  for (const auto& e : trace.epochs) {
    py::dict d;
    d["epoch"] = e.epoch;
    d["wall_time_s"] = e.wall_time_s;
    d["primal"] = e.primal;
    d["dual"] = opt(e.dual);
    d["gap"] = opt(e.gap);
    d["avg_primal"] = opt(e.avg_primal);
    d["avg_gap"] = opt(e.avg_gap);
    d["test_error"] = opt(e.test_error);
    d["auprc"] = opt(e.auprc);
    epochs.append(d);
  }
  py::dict out;
  out["epochs"] = epochs;
  return out;
}

SaddleParams params_for(const SparseDataset& data, const TrainConfig& config) { return make_params(data, config); }

}  // namespace

PYBIND11_MODULE(_dso, m) {
  m.doc() = "Distributed stochastic saddle-point training for regularized risk minimization";

  static py::exception<Error> dso_error(m, "DsoError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = dso_error;
      py::object instance = err(std::string(e.what()));
      instance.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(dso_error.ptr(), instance.ptr());
    }
  });

  py::class_<SparseDataset>(m, "Dataset")
      .def_property_readonly("num_examples", &SparseDataset::num_examples)
      .def_property_readonly("num_features", &SparseDataset::num_features)
      .def_property_readonly("nnz", &SparseDataset::nnz)
      .def_property_readonly("folded", &SparseDataset::folded)
      .def_property_readonly("labels",
                             [](const SparseDataset& d) {
                               return to_array({d.labels().begin(), d.labels().end()});
                             })
      .def_property_readonly("raw_labels",
                             [](const SparseDataset& d) {
                               return to_array({d.raw_labels().begin(), d.raw_labels().end()});
                             })
      .def("row",
           [](const SparseDataset& d, std::size_t i) {
             if (i >= d.num_examples()) throw py::index_error("row out of range");
             std::vector<std::pair<Index, double>> out;
             for (const auto& nz : d.row(i)) out.emplace_back(nz.index, nz.value);
             return out;
           })
      .def("to_libsvm",
           [](const SparseDataset& d) {
             std::ostringstream out;
             write_libsvm(out, d);
             return out.str();
           })
      .def("stats",
           [](const SparseDataset& d) {
             const auto s = dataset_stats(d);
             py::dict out;
             out["m"] = s.m;
             out["d"] = s.d;
             out["nnz"] = s.nnz_total;
             out["density"] = s.density;
             out["max_row_nnz"] = s.max_row_nnz;
             out["max_col_nnz"] = s.max_col_nnz;
             return out;
           })
      .def("__repr__", [](const SparseDataset& d) {
        return "<Dataset m=" + std::to_string(d.num_examples()) + " d=" + std::to_string(d.num_features()) +
               " nnz=" + std::to_string(d.nnz()) + (d.folded() ? " folded" : "") + ">";
      });

  m.def(
      "parse_libsvm",
      [](const std::string& text, bool regression, std::size_t min_features) {
        std::istringstream in(text);
        return parse_libsvm(in, ParseOptions{mode_of(regression), min_features});
      },
      py::arg("text"), py::arg("regression") = false, py::arg("min_features") = 0);
  m.def(
      "read_libsvm",
      [](const std::string& path, bool regression, std::size_t min_features) {
        return read_libsvm_file(path, ParseOptions{mode_of(regression), min_features});
      },
      py::arg("path"), py::arg("regression") = false, py::arg("min_features") = 0);
  m.def("fold_labels", &fold_labels, py::arg("data"));
  m.def(
      "make_synthetic",
      [](std::size_t examples, std::size_t features, double density, std::uint64_t seed, double label_noise) {
        return make_synthetic({examples, features, density, seed, label_noise});
      },
      py::arg("examples"), py::arg("features"), py::arg("density") = 0.1, py::arg("seed") = 0,
      py::arg("label_noise") = 0.0);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("lambda_", &TrainConfig::lambda)
      .def_property(
          "loss", [](const TrainConfig& c) { return std::string(to_string(c.loss)); },
          [](TrainConfig& c, const std::string& v) { c.loss = parse_loss_kind(v); })
      .def_property(
          "regularizer", [](const TrainConfig& c) { return std::string(to_string(c.regularizer)); },
          [](TrainConfig& c, const std::string& v) { c.regularizer = parse_regularizer_kind(v); })
      .def_property(
          "schedule", [](const TrainConfig& c) { return std::string(to_string(c.schedule.kind)); },
          [](TrainConfig& c, const std::string& v) { c.schedule.kind = parse_schedule_kind(v); })
      .def_property(
          "eta0", [](const TrainConfig& c) { return c.schedule.eta0; },
          [](TrainConfig& c, double v) { c.schedule.eta0 = v; })
      .def_property(
          "adagrad_epsilon", [](const TrainConfig& c) { return c.schedule.epsilon; },
          [](TrainConfig& c, double v) { c.schedule.epsilon = v; })
      .def_property(
          "partition", [](const TrainConfig& c) { return std::string(to_string(c.partition)); },
          [](TrainConfig& c, const std::string& v) { c.partition = parse_partition_strategy(v); })
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("workers", &TrainConfig::workers)
      .def_readwrite("alpha_bound", &TrainConfig::alpha_bound)
      .def_readwrite("w_bound", &TrainConfig::w_bound)
      .def_readwrite("shuffle", &TrainConfig::shuffle)
      .def_readwrite("eval_every", &TrainConfig::eval_every)
      .def_readwrite("log_updates", &TrainConfig::log_updates);

  py::class_<UpdateLog>(m, "UpdateLog")
      .def("__len__", [](const UpdateLog& log) { return log.size(); })
      .def("save", [](const UpdateLog& log, const std::string& path) { save_update_log(path, log); })
      .def_static("load", [](const std::string& path) { return load_update_log(path); });

  m.def(
      "train",
      [](const SparseDataset& data, const TrainConfig& config, const SparseDataset* test) {
        DsoRun run;
        {
          py::gil_scoped_release release;
          run = run_dso(data, make_partition(data, config.workers, config.partition), config, test);
        }
        py::dict out;
        out["w"] = to_array(run.state.w);
        out["alpha"] = to_array(run.state.alpha);
        out["trace"] = trace_to_py(run.trace)["epochs"];
        out["epoch_times"] = run.timings.epoch_s;
        out["log"] = run.log ? py::cast(std::move(*run.log)) : py::none();
        return out;
      },
      py::arg("data"), py::arg("config"), py::arg("test") = nullptr,
      "Train with the parallel engine; returns w, alpha, trace, epoch_times and the optional update log.");
  m.def(
      "train_psgd",
      [](const SparseDataset& data, const TrainConfig& config, const SparseDataset* test) {
        PsgdRun run;
        {
          py::gil_scoped_release release;
          run = run_psgd(data, make_partition(data, config.workers, config.partition), config, test);
        }
        py::dict out;
        out["w"] = to_array(run.state.w);
        out["trace"] = trace_to_py(run.trace)["epochs"];
        return out;
      },
      py::arg("data"), py::arg("config"), py::arg("test") = nullptr);
  m.def(
      "replay",
      [](const SparseDataset& data, const TrainConfig& config, const UpdateLog& log) {
        const auto state = replay_log(data, config, log);
        return py::make_tuple(to_array(state.w), to_array(state.alpha));
      },
      py::arg("data"), py::arg("config"), py::arg("log"));

  m.def(
      "primal_objective",
      [](const SparseDataset& data, const TrainConfig& config, const Array& w) {
        return primal_objective(params_for(data, config), to_vector(w));
      },
      py::arg("data"), py::arg("config"), py::arg("w"));
  m.def(
      "dual_objective",
      [](const SparseDataset& data, const TrainConfig& config, const Array& alpha) {
        return dual_objective(params_for(data, config), to_vector(alpha));
      },
      py::arg("data"), py::arg("config"), py::arg("alpha"));
  m.def(
      "duality_gap",
      [](const SparseDataset& data, const TrainConfig& config, const Array& w, const Array& alpha) {
        return duality_gap(params_for(data, config), to_vector(w), to_vector(alpha));
      },
      py::arg("data"), py::arg("config"), py::arg("w"), py::arg("alpha"));
  m.def(
      "conjugate",
      [](const std::string& loss, double alpha, double target) {
        const LossModel model{parse_loss_kind(loss)};
        return py::make_tuple(conjugate_value(model, alpha, target), conjugate_grad(model, alpha, target).value);
      },
      py::arg("loss"), py::arg("alpha"), py::arg("target") = 1.0,
      "Value and gradient of the loss conjugate at -alpha.");

  m.def(
      "test_error", [](const Array& w, const SparseDataset& test) { return eval_test_error(to_vector(w), test); },
      py::arg("w"), py::arg("test"));
  m.def(
      "auprc", [](const Array& scores, const Array& labels) { return auprc(to_vector(scores), to_vector(labels)); },
      py::arg("scores"), py::arg("labels"));
  m.def(
      "fit_scaling_model",
      [](const std::vector<double>& workers, const std::vector<double>& times) {
        if (workers.size() != times.size()) throw Error(ErrorCode::kInvalidArgument, "length mismatch");
        std::vector<ScalingSample> samples;
        for (std::size_t k = 0; k < workers.size(); ++k) samples.push_back({workers[k], times[k]});
        const auto model = fit_scaling_model(samples);
        py::dict out;
        out["A"] = model.a;
        out["B"] = model.b;
        out["r_squared"] = model.r_squared;
        return out;
      },
      py::arg("workers"), py::arg("epoch_times"));

  m.def(
      "save_model",
      [](const std::string& path, const SparseDataset& data, const TrainConfig& config, const Array& w,
         const Array& alpha) {
        save_checkpoint(path, make_checkpoint(params_for(data, config), config.schedule, to_vector(w),
                                              to_vector(alpha)));
      },
      py::arg("path"), py::arg("data"), py::arg("config"), py::arg("w"), py::arg("alpha"));
  m.def(
      "load_model",
      [](const std::string& path) {
        const auto c = load_checkpoint(path);
        py::dict out;
        out["loss"] = std::string(to_string(c.header.loss));
        out["regularizer"] = std::string(to_string(c.header.regularizer));
        out["schedule"] = std::string(to_string(c.header.schedule));
        out["lambda"] = c.header.lambda;
        out["alpha_bound"] = c.header.alpha_bound;
        out["w_bound"] = c.header.w_bound;
        out["w"] = to_array(c.w);
        out["alpha"] = to_array(c.alpha);
        return out;
      },
      py::arg("path"));
}
