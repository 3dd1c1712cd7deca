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

#include <string>
#include <string_view>
#include <vector>

namespace relpii {

std::string_view Trim(std::string_view s);

// ASCII lower-casing; other bytes untouched.
std::string AsciiLower(std::string_view s);

// Splits on ASCII whitespace, dropping empty pieces.
std::vector<std::string_view> SplitWhitespace(std::string_view s);

// Removes one layer of matching "...", '...', or curly double quotes.
std::string_view StripWrappingQuotes(std::string_view s);

std::string Join(const std::vector<std::string>& parts, std::string_view sep);

bool StartsWith(std::string_view s, std::string_view prefix);

}  // namespace relpii
