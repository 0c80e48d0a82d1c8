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

#include "dso/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "dso/detail/binary_io.hpp"
#include "dso/error.hpp"

namespace dso {
namespace {

constexpr char kMagic[8] = {'D', 'S', 'O', 'M', 'O', 'D', 'E', 'L'};
constexpr auto kErr = ErrorCode::kIo;

}  // namespace

Checkpoint make_checkpoint(const SaddleParams& params, const StepSchedule& schedule, std::vector<double> w,
                           std::vector<double> alpha) {
  Checkpoint c;
  c.header.m = params.data().num_examples();
  c.header.d = params.data().num_features();
  c.header.loss = params.loss().kind;
  c.header.regularizer = params.regularizer().kind;
  c.header.schedule = schedule.kind;
  c.header.lambda = params.lambda();
  c.header.alpha_bound = params.loss().alpha_bound;
  c.header.w_bound = params.regularizer().w_bound;
  c.w = std::move(w);
  c.alpha = std::move(alpha);
  return c;
}

void write_checkpoint(std::ostream& out, const Checkpoint& c) {
  if (c.w.size() != c.header.d || c.alpha.size() != c.header.m) {
    throw Error(ErrorCode::kInvalidArgument, "checkpoint vectors do not match the header dimensions");
  }
  out.write(kMagic, sizeof(kMagic));
  detail::put_le<std::uint32_t>(out, kCheckpointVersion);
  detail::put_le<std::uint8_t>(out, static_cast<std::uint8_t>(c.header.loss));
  detail::put_le<std::uint8_t>(out, static_cast<std::uint8_t>(c.header.regularizer));
  detail::put_le<std::uint8_t>(out, static_cast<std::uint8_t>(c.header.schedule));
  detail::put_le<std::uint8_t>(out, 0);
  detail::put_le<std::uint64_t>(out, c.header.m);
  detail::put_le<std::uint64_t>(out, c.header.d);
  detail::put_f64(out, c.header.lambda);
  detail::put_f64(out, c.header.alpha_bound);
  detail::put_f64(out, c.header.w_bound);
  for (double v : c.w) detail::put_f64(out, v);
  for (double v : c.alpha) detail::put_f64(out, v);
  if (!out) throw Error(kErr, "failed writing model checkpoint");
}

Checkpoint read_checkpoint(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error(kErr, "not a model checkpoint (bad magic)");
  }
  const auto version = detail::get_le<std::uint32_t>(in, kErr, "version");
  if (version != kCheckpointVersion) {
    throw Error(kErr, "unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint c;
  const auto loss = detail::get_le<std::uint8_t>(in, kErr, "loss");
  const auto reg = detail::get_le<std::uint8_t>(in, kErr, "regularizer");
  const auto schedule = detail::get_le<std::uint8_t>(in, kErr, "schedule");
  detail::get_le<std::uint8_t>(in, kErr, "reserved");
  if (loss > 2 || reg > 1 || schedule > 2) throw Error(kErr, "checkpoint header has unknown enum values");
  c.header.loss = static_cast<LossKind>(loss);
  c.header.regularizer = static_cast<RegularizerKind>(reg);
  c.header.schedule = static_cast<ScheduleKind>(schedule);
  c.header.m = detail::get_le<std::uint64_t>(in, kErr, "m");
  c.header.d = detail::get_le<std::uint64_t>(in, kErr, "d");
  c.header.lambda = detail::get_f64(in, kErr, "lambda");
  c.header.alpha_bound = detail::get_f64(in, kErr, "B_alpha");
  c.header.w_bound = detail::get_f64(in, kErr, "W");
  if (c.header.m > 0xffffffffULL || c.header.d > 0xffffffffULL) throw Error(kErr, "checkpoint dimensions overflow");
  c.w.resize(c.header.d);
  c.alpha.resize(c.header.m);
  for (double& v : c.w) v = detail::get_f64(in, kErr, "w");
  for (double& v : c.alpha) v = detail::get_f64(in, kErr, "alpha");
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(kErr, "cannot open " + path.string() + " for writing");
  write_checkpoint(out, checkpoint);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(kErr, "cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace dso
