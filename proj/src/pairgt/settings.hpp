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

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace pairgt {

/// Flat `key = value` configuration store. Keys are kept sorted so that
/// the textual form is canonical. Lines starting with '#' are comments.
class Settings {
 public:
  static Settings parse(std::string_view text);
  static Settings load(const std::filesystem::path& path);

  void set(std::string key, std::string value);
  bool contains(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;
  void erase(std::string_view key);
  /// Copies every entry of `other` over this one.
  void merge(const Settings& other);

  const std::map<std::string, std::string, std::less<>>& entries() const {
    return entries_;
  }

  /// Canonical text: one `key = value` line per entry, sorted by key.
  std::string to_text() const;

  bool operator==(const Settings&) const = default;

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

}  // namespace pairgt
