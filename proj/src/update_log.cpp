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

#include "dso/update_log.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include "dso/detail/binary_io.hpp"
#include "dso/error.hpp"

namespace dso {
namespace {

constexpr char kMagic[8] = {'D', 'S', 'O', 'U', 'L', 'O', 'G', '1'};
constexpr auto kErr = ErrorCode::kCorruptLog;

}  // namespace

void write_update_log(std::ostream& out, std::span<const UpdateRecord> log) {
  out.write(kMagic, sizeof(kMagic));
  detail::put_le<std::uint64_t>(out, log.size());
  for (const auto& r : log) {
    detail::put_le(out, r.epoch);
    detail::put_le(out, r.inner);
    detail::put_le(out, r.worker);
    detail::put_le(out, r.i);
    detail::put_le(out, r.j);
    detail::put_f64(out, r.eta);
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing update log");
}

UpdateLog read_update_log(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error(kErr, "not an update log (bad magic)");
  }
  const auto count = detail::get_le<std::uint64_t>(in, kErr, "record count");
  UpdateLog log;
  log.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 24)));
  for (std::uint64_t k = 0; k < count; ++k) {
    UpdateRecord r;
    r.epoch = detail::get_le<std::uint32_t>(in, kErr, "record");
    r.inner = detail::get_le<std::uint16_t>(in, kErr, "record");
    r.worker = detail::get_le<std::uint16_t>(in, kErr, "record");
    r.i = detail::get_le<std::uint64_t>(in, kErr, "record");
    r.j = detail::get_le<std::uint64_t>(in, kErr, "record");
    r.eta = detail::get_f64(in, kErr, "record");
    log.push_back(r);
  }
  return log;
}

void save_update_log(const std::filesystem::path& path, std::span<const UpdateRecord> log) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  write_update_log(out, log);
}

UpdateLog load_update_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return read_update_log(in);
}

}  // namespace dso
