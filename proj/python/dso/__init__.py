# Copyright 2026 The DSO Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python bindings for the DSO saddle-point solver."""

from ._dso import (
    Dataset,
    DsoError,
    TrainConfig,
    UpdateLog,
    auprc,
    conjugate,
    dual_objective,
    duality_gap,
    fit_scaling_model,
    fold_labels,
    load_model,
    make_synthetic,
    parse_libsvm,
    primal_objective,
    read_libsvm,
    replay,
    save_model,
    test_error,
    train,
    train_psgd,
)

__all__ = [
    "Dataset",
    "DsoError",
    "TrainConfig",
    "UpdateLog",
    "auprc",
    "conjugate",
    "dual_objective",
    "duality_gap",
    "fit_scaling_model",
    "fold_labels",
    "load_model",
    "make_synthetic",
    "parse_libsvm",
    "primal_objective",
    "read_libsvm",
    "replay",
    "save_model",
    "test_error",
    "train",
    "train_psgd",
]
