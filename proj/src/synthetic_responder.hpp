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

// Offline stand-in for a chat model. Recognizes each built-in prompt by its
// opening words and answers deterministically from the prompt text alone, so
// the whole toolchain can run without a provider. Unrecognized prompts get
// std::nullopt (the mock then applies its strict/lenient rule).

#pragma once

#include <string_view>
#include <vector>

#include "gateway.hpp"
#include "types.hpp"

namespace relpii {

MockProvider::Responder MakeSyntheticResponder();

// Value pool used for a category; exposed for tests.
const std::vector<std::string_view>& SyntheticValuePool(PiiType type);

}  // namespace relpii
