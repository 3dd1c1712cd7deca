// Copyright 2026 The relpii Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "utf8.hpp"

#include <algorithm>

namespace relpii {
namespace {

bool IsContinuation(unsigned char c) { return (c & 0xC0) == 0x80; }

}  // namespace

CodePointIndex::CodePointIndex(std::string_view text) {
  byte_of_.reserve(text.size() + 1);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i == 0 || !IsContinuation(static_cast<unsigned char>(text[i]))) {
      byte_of_.push_back(i);
    }
  }
  byte_of_.push_back(text.size());
}

std::optional<std::size_t> CodePointIndex::CodePointAt(std::size_t byte) const {
  auto it = std::lower_bound(byte_of_.begin(), byte_of_.end(), byte);
  if (it == byte_of_.end() || *it != byte) return std::nullopt;
  return static_cast<std::size_t>(it - byte_of_.begin());
}

std::size_t CodePointLength(std::string_view text) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i == 0 || !IsContinuation(static_cast<unsigned char>(text[i]))) ++n;
  }
  return n;
}

}  // namespace relpii
