// Copyright 2026 The pairgt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pairgt/settings.hpp"

#include "pairgt/error.hpp"
#include "pairgt/format.hpp"

namespace pairgt {

Settings Settings::parse(std::string_view text) {
  Settings s;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kParse, "config line " + std::to_string(line_no) +
                                         ": expected 'key = value'");
    }
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw Error(ErrorCode::kParse,
                  "config line " + std::to_string(line_no) + ": empty key");
    }
    s.set(std::string(key), std::string(value));
  }
  return s;
}

Settings Settings::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

void Settings::set(std::string key, std::string value) {
  entries_.insert_or_assign(std::move(key), std::move(value));
}

bool Settings::contains(std::string_view key) const {
  return entries_.find(key) != entries_.end();
}

std::optional<std::string> Settings::get(std::string_view key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void Settings::erase(std::string_view key) {
  auto it = entries_.find(key);
  if (it != entries_.end()) entries_.erase(it);
}

void Settings::merge(const Settings& other) {
  for (const auto& [k, v] : other.entries_) set(k, v);
}

std::string Settings::to_text() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

}  // namespace pairgt
