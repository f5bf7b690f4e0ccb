// Copyright 2026 The THA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef THA_BYTEIO_H_
#define THA_BYTEIO_H_

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "tha/errors.h"

namespace tha::byteio {

inline void PutU32Le(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 4);
}

inline void PutU64Le(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 8);
}

inline void PutF64Le(std::ostream& out, double v) {
  PutU64Le(out, std::bit_cast<std::uint64_t>(v));
}

inline void PutU32Be(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i)
    b[i] = static_cast<char>((v >> (8 * (3 - i))) & 0xFF);
  out.write(b, 4);
}

inline void ReadExact(std::istream& in, char* dst, std::size_t n,
                      const char* what) {
  in.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw DataError(DataError::Kind::kTruncated,
                    std::string("truncated input while reading ") + what);
  }
}

inline std::uint32_t GetU32Le(std::istream& in, const char* what) {
  unsigned char b[4];
  ReadExact(in, reinterpret_cast<char*>(b), 4, what);
  return std::uint32_t{b[0]} | std::uint32_t{b[1]} << 8 |
         std::uint32_t{b[2]} << 16 | std::uint32_t{b[3]} << 24;
}

inline std::uint64_t GetU64Le(std::istream& in, const char* what) {
  unsigned char b[8];
  ReadExact(in, reinterpret_cast<char*>(b), 8, what);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

inline double GetF64Le(std::istream& in, const char* what) {
  return std::bit_cast<double>(GetU64Le(in, what));
}

inline std::uint32_t GetU32Be(std::istream& in, const char* what) {
  unsigned char b[4];
  ReadExact(in, reinterpret_cast<char*>(b), 4, what);
  return std::uint32_t{b[0]} << 24 | std::uint32_t{b[1]} << 16 |
         std::uint32_t{b[2]} << 8 | std::uint32_t{b[3]};
}

}  // namespace tha::byteio

#endif  // THA_BYTEIO_H_
