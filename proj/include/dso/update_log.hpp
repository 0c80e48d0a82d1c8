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

#ifndef DSO_UPDATE_LOG_HPP_
#define DSO_UPDATE_LOG_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace dso {

/// One applied update: epoch t, inner iteration r and worker q (1-based),
/// the coordinate pair (i, j) and the epoch step.
struct UpdateRecord {
  std::uint32_t epoch;
  std::uint16_t inner;
  std::uint16_t worker;
  std::uint64_t i;
  std::uint64_t j;
  double eta;

  friend bool operator==(const UpdateRecord&, const UpdateRecord&) = default;
};

/// Records in serialization order: (epoch, inner, worker, sequence).
using UpdateLog = std::vector<UpdateRecord>;

// File layout, little-endian: char[8] "DSOULOG1", u64 record count, then
// per record u32 t, u16 r, u16 q, u64 i, u64 j, f64 eta.
void write_update_log(std::ostream& out, std::span<const UpdateRecord> log);
UpdateLog read_update_log(std::istream& in);
void save_update_log(const std::filesystem::path& path, std::span<const UpdateRecord> log);
UpdateLog load_update_log(const std::filesystem::path& path);

}  // namespace dso

#endif  // DSO_UPDATE_LOG_HPP_
