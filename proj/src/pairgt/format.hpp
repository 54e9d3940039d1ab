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

// Text formatting, parsing and seed-derivation helpers shared by every
// module that writes files.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pairgt {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

double parse_double(std::string_view text, std::string_view what);
std::uint64_t parse_uint(std::string_view text, std::string_view what);

std::vector<std::string_view> split(std::string_view line, char delim);
std::string_view trim(std::string_view text);

/// Reads a whole file; throws Error(kIo) on failure.
std::string read_file(const std::filesystem::path& path);
/// Writes a whole file, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view content);

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);
/// Stable sub-seed for a named purpose (FNV-1a over the tag, then mixed).
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b = 0);

}  // namespace pairgt
