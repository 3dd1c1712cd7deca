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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace relpii {

// Maps code point offsets of a UTF-8 string to byte offsets and back.
// Any byte that is not a continuation byte starts a new code point, so
// malformed input still gets a total mapping.
class CodePointIndex {
 public:
  explicit CodePointIndex(std::string_view text);

  // Number of code points.
  std::size_t size() const { return byte_of_.size() - 1; }

  std::size_t ByteOf(std::size_t cp) const { return byte_of_[cp]; }

  // Code point index starting at `byte`, or nullopt when `byte` falls inside
  // a multi-byte sequence.
  std::optional<std::size_t> CodePointAt(std::size_t byte) const;

  // Byte slice for code point range [start, end). Caller checks bounds.
  std::string_view Slice(std::string_view text, std::size_t start,
                         std::size_t end) const {
    return text.substr(byte_of_[start], byte_of_[end] - byte_of_[start]);
  }

 private:
  std::vector<std::size_t> byte_of_;
};

std::size_t CodePointLength(std::string_view text);

}  // namespace relpii
