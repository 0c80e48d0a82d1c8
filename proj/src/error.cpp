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

#include "dso/error.hpp"

namespace dso {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kDuplicateFeature: return "DuplicateFeature";
    case ErrorCode::kNonFinite: return "NonFiniteValue";
    case ErrorCode::kAlreadyFolded: return "AlreadyFolded";
    case ErrorCode::kFoldRequiresBinaryLabels: return "FoldRequiresBinaryLabels";
    case ErrorCode::kDomain: return "DomainError";
    case ErrorCode::kIndexNotInOmega: return "IndexNotInOmega";
    case ErrorCode::kInconsistentGap: return "InconsistentGap";
    case ErrorCode::kCorruptLog: return "CorruptLog";
    case ErrorCode::kLogOverflow: return "LogOverflow";
    case ErrorCode::kWorkerFailure: return "WorkerFailure";
    case ErrorCode::kInsufficientSamples: return "InsufficientSamples";
    case ErrorCode::kSingularDesign: return "SingularDesign";
    case ErrorCode::kSingleClass: return "SingleClass";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

ParseError::ParseError(ErrorCode code, std::size_t line, const std::string& what)
    : Error(code, "line " + std::to_string(line) + ": " + what), line_(line) {}

}  // namespace dso
