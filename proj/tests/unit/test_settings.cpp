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

#include <doctest.h>

#include <fstream>

#include "pairgt/error.hpp"
#include "pairgt/settings.hpp"
#include "test_util.hpp"

using pairgt::Error;
using pairgt::ErrorCode;
using pairgt::Settings;

TEST_CASE("settings parse") {
  const Settings s = Settings::parse(
      "# comment\n"
      "  k_c = 4\n"
      "\n"
      "corpus=data/c.tsv\n"
      "h =  0.5  \n"
      "empty =\n");
  CHECK(s.get("k_c") == "4");
  CHECK(s.get("corpus") == "data/c.tsv");
  CHECK(s.get("h") == "0.5");
  CHECK(s.get("empty") == "");
  CHECK_FALSE(s.get("k_p").has_value());
  CHECK(s.entries().size() == 4);
}

TEST_CASE("settings parse errors carry the line") {
  try {
    Settings::parse("a = 1\nno equals sign\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(Settings::parse(" = 3\n"), Error);
}

TEST_CASE("later entries win and text is canonical") {
  Settings s = Settings::parse("b = 1\na = 2\nb = 3\n");
  CHECK(s.to_text() == "a = 2\nb = 3\n");
  CHECK(Settings::parse(s.to_text()) == s);
  Settings over;
  over.set("a", "9");
  over.set("c", "x");
  s.merge(over);
  CHECK(s.to_text() == "a = 9\nb = 3\nc = x\n");
  s.erase("b");
  CHECK_FALSE(s.contains("b"));
}

TEST_CASE("settings load") {
  const auto dir = pairgt::testing::scratch_dir("settings");
  std::ofstream(dir / "run.conf") << "seed = 7\n";
  CHECK(Settings::load(dir / "run.conf").get("seed") == "7");
  try {
    Settings::load(dir / "missing.conf");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIo);
  }
}
