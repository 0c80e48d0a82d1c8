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

#ifndef DSO_ERROR_HPP_
#define DSO_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace dso {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kEmptyDataset,
  kParse,
  kDuplicateFeature,
  kNonFinite,
  kAlreadyFolded,
  kFoldRequiresBinaryLabels,
  kDomain,
  kIndexNotInOmega,
  kInconsistentGap,
  kCorruptLog,
  kLogOverflow,
  kWorkerFailure,
  kInsufficientSamples,
  kSingularDesign,
  kSingleClass,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-readable code; the
// CLI maps codes onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse failures also remember the 1-based line number of the offending input.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t line, const std::string& what);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace dso

#endif  // DSO_ERROR_HPP_
