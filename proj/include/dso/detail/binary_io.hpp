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

#ifndef DSO_DETAIL_BINARY_IO_HPP_
#define DSO_DETAIL_BINARY_IO_HPP_

#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "dso/error.hpp"

// Little-endian scalar I/O independent of the host byte order.
namespace dso::detail {

template <typename UInt>
void put_le(std::ostream& out, UInt v) {
  std::array<char, sizeof(UInt)> bytes;
  for (std::size_t k = 0; k < sizeof(UInt); ++k) bytes[k] = static_cast<char>((v >> (8 * k)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

inline void put_f64(std::ostream& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }

template <typename UInt>
UInt get_le(std::istream& in, ErrorCode code, const char* what) {
  std::array<unsigned char, sizeof(UInt)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw Error(code, std::string("truncated input while reading ") + what);
  }
  UInt v = 0;
  for (std::size_t k = 0; k < sizeof(UInt); ++k) v |= static_cast<UInt>(bytes[k]) << (8 * k);
  return v;
}

inline double get_f64(std::istream& in, ErrorCode code, const char* what) {
  return std::bit_cast<double>(get_le<std::uint64_t>(in, code, what));
}

}  // namespace dso::detail

#endif  // DSO_DETAIL_BINARY_IO_HPP_
