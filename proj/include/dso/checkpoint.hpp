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

#ifndef DSO_CHECKPOINT_HPP_
#define DSO_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "dso/objective.hpp"
#include "dso/serial.hpp"

namespace dso {

// Model file layout, all little-endian:
//   char[8]  "DSOMODEL"
//   u32      format version (1)
//   u8       loss, u8 regularizer, u8 schedule, u8 reserved
//   u64      m, u64 d
//   f64      lambda, f64 B_alpha, f64 W
//   f64[d]   w
//   f64[m]   alpha
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct ModelHeader {
  std::uint64_t m = 0;
  std::uint64_t d = 0;
  LossKind loss = LossKind::kHinge;
  RegularizerKind regularizer = RegularizerKind::kL2;
  ScheduleKind schedule = ScheduleKind::kInvSqrtT;
  double lambda = 0.0;
  double alpha_bound = kDefaultAlphaBound;
  double w_bound = 0.0;
};

struct Checkpoint {
  ModelHeader header;
  std::vector<double> w;
  std::vector<double> alpha;
};

Checkpoint make_checkpoint(const SaddleParams& params, const StepSchedule& schedule, std::vector<double> w,
                           std::vector<double> alpha);

void write_checkpoint(std::ostream& out, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(std::istream& in);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace dso

#endif  // DSO_CHECKPOINT_HPP_
