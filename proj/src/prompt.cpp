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

#include "prompt.hpp"

#include <cctype>

#include "error.hpp"
#include "io.hpp"

namespace relpii {

// Generated from prompts/*.txt at configure time.
extern const std::pair<std::string_view, std::string_view> kBuiltinPrompts[];
extern const std::size_t kBuiltinPromptCount;

namespace {

bool IsIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string DropTrailingNewline(std::string s) {
  if (!s.empty() && s.back() == '\n') s.pop_back();
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

PromptTemplate::PromptTemplate(std::string name, std::string body)
    : name_(std::move(name)), body_(std::move(body)) {
  std::string literal;
  auto flush = [&] {
    if (!literal.empty()) segments_.push_back({false, std::move(literal)});
    literal.clear();
  };
  const std::string& b = body_;
  std::size_t i = 0;
  while (i < b.size()) {
    const char c = b[i];
    if (c == '{' && i + 1 < b.size() && b[i + 1] == '{') {
      literal.push_back('{');
      i += 2;
      continue;
    }
    if (c == '}' && i + 1 < b.size() && b[i + 1] == '}') {
      literal.push_back('}');
      i += 2;
      continue;
    }
    if (c == '{' && i + 1 < b.size() && IsIdentStart(b[i + 1])) {
      std::size_t j = i + 1;
      while (j < b.size() && IsIdentChar(b[j])) ++j;
      if (j < b.size() && b[j] == '}') {
        flush();
        std::string slot = b.substr(i + 1, j - i - 1);
        if (!optional_.count(slot)) required_.insert(slot);
        segments_.push_back({true, std::move(slot)});
        i = j + 1;
        continue;
      }
      if (j < b.size() && b[j] == '=') {
        auto close = b.find('}', j);
        if (close != std::string::npos) {
          flush();
          std::string slot = b.substr(i + 1, j - i - 1);
          optional_[slot] = b.substr(j + 1, close - j - 1);
          required_.erase(slot);
          segments_.push_back({true, std::move(slot)});
          i = close + 1;
          continue;
        }
      }
    }
    literal.push_back(c);
    ++i;
  }
  flush();
}

std::string PromptTemplate::Render(const PromptVars& vars) const {
  for (const auto& req : required_) {
    if (!vars.count(req)) {
      throw Error(ErrorCode::kMissingVar,
                  "template " + name_ + ": missing variable " + req);
    }
  }
  for (const auto& [key, value] : vars) {
    if (!required_.count(key) && !optional_.count(key)) {
      throw Error(ErrorCode::kUnknownVar,
                  "template " + name_ + ": unknown variable " + key);
    }
  }
  std::string out;
  out.reserve(body_.size() + 64);
  for (const auto& seg : segments_) {
    if (!seg.is_slot) {
      out += seg.text;
    } else if (auto it = vars.find(seg.text); it != vars.end()) {
      out += it->second;
    } else {
      out += optional_.at(seg.text);
    }
  }
  return out;
}

PromptCatalog PromptCatalog::Builtin() {
  PromptCatalog catalog;
  for (std::size_t i = 0; i < kBuiltinPromptCount; ++i) {
    const auto& [name, body] = kBuiltinPrompts[i];
    catalog.Set(PromptTemplate(std::string(name),
                               DropTrailingNewline(std::string(body))));
  }
  return catalog;
}

PromptCatalog PromptCatalog::FromDirectory(const std::filesystem::path& dir) {
  PromptCatalog catalog = Builtin();
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kIo, "prompt directory not found: " + dir.string());
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
    catalog.Set(PromptTemplate(entry.path().stem().string(),
                               DropTrailingNewline(ReadFile(entry.path()))));
  }
  return catalog;
}

const PromptTemplate& PromptCatalog::Get(std::string_view name) const {
  auto it = templates_.find(name);
  if (it == templates_.end()) {
    throw Error(ErrorCode::kNotFound,
                "no prompt template named " + std::string(name));
  }
  return it->second;
}

std::vector<std::string> PromptCatalog::Names() const {
  std::vector<std::string> names;
  for (const auto& [k, v] : templates_) names.push_back(k);
  return names;
}

void PromptCatalog::Set(PromptTemplate t) {
  auto name = t.name();
  templates_.insert_or_assign(std::move(name), std::move(t));
}

std::string_view BuiltinPromptBody(std::string_view name) {
  for (std::size_t i = 0; i < kBuiltinPromptCount; ++i) {
    if (kBuiltinPrompts[i].first == name) return kBuiltinPrompts[i].second;
  }
  return {};
}

}  // namespace relpii
