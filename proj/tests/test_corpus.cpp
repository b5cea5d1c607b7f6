// Copyright 2026 The driftlens Authors
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

#include <cstdlib>
#include <random>
#include <string>

#include "doctest.h"
#include "driftlens/corpus.hpp"
#include "driftlens/error.hpp"
#include "support/synthetic.hpp"

using namespace driftlens;

namespace {

std::string fixture(const std::string& name) {
  const char* dir = std::getenv("DRIFTLENS_FIXTURES");
  return std::string(dir ? dir : "tests/fixtures") + "/" + name;
}

}  // namespace

TEST_CASE("normalize_lines splits on LF and drops one trailing CR") {
  CHECK(normalize_lines("a\r\nb\n") == std::vector<std::string>{"a", "b"});
  CHECK(normalize_lines("").empty());
  CHECK(normalize_lines("x\n\ny") == std::vector<std::string>{"x", "", "y"});
  CHECK(normalize_lines("  lead\t \n") == std::vector<std::string>{"  lead\t "});
}

TEST_CASE("bug counts threshold at zero") {
  const std::string csv = "name,bug,src\nA.java,0,a\nB.java,1,b\nC.java,3,c\n";
  const auto set = parse_version(csv, {}, "toy", "1");
  REQUIRE(set.size() == 3);
  CHECK(set.find("A.java")->label == Label::benign);
  CHECK(set.find("B.java")->label == Label::defective);
  CHECK(set.find("C.java")->label == Label::defective);
  CHECK(set.defective_fraction() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("single benign row") {
  const auto set = parse_version("name,bug,src\nOnly.java,0,x\n", {}, "toy", "1");
  REQUIRE(set.size() == 1);
  CHECK(set.files()[0].label == Label::benign);
  CHECK(set.files()[0].version_id == "1");
}

TEST_CASE("fallback column names are honoured") {
  const auto set = parse_version("File,Bug,SRC\nA.java,2,body\n", {}, "toy", "1");
  CHECK(set.find("A.java")->label == Label::defective);
  CHECK(set.find("A.java")->source == "body");
}

TEST_CASE("custom column names") {
  ColumnSpec cols{"path", "defects", "code"};
  const auto set = parse_version("code,path,defects\nint x;,P.java,0\n", cols, "toy", "1");
  CHECK(set.find("P.java")->source == "int x;");
}

TEST_CASE("load errors") {
  SUBCASE("missing column names it") {
    try {
      parse_version("name,src\nA.java,x\n", {}, "toy", "1");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("'bug'") != std::string::npos);
    }
  }
  SUBCASE("duplicate paths are listed") {
    try {
      parse_version("name,bug,src\nA.java,0,x\nA.java,1,y\n", {}, "toy", "1");
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("A.java") != std::string::npos);
    }
  }
  SUBCASE("bad label reports the row") {
    try {
      parse_version("name,bug,src\nA.java,0,x\nB.java,oops,y\n", {}, "toy", "1");
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_version("/nonexistent/file.csv"), ConfigError);
  }
}

TEST_CASE("source is preserved byte for byte") {
  const std::string src = "class A {\r\n  String s = \"a,b\";\n\t}\n";
  VersionSet set("toy", "1", {{"A.java", src, Label::defective, "1"}});
  const auto back = parse_version(serialize_version(set), {}, "toy", "1");
  CHECK(back.find("A.java")->source == src);
}

TEST_CASE("invalid UTF-8 is replaced, not rejected") {
  std::string csv = "name,bug,src\nA.java,0,\"caf\xE9\"\n";
  const auto set = parse_version(csv, {}, "toy", "1");
  CHECK(set.find("A.java")->source.find('\xE9') == std::string::npos);
}

TEST_CASE("round trip over generated corpora") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto cp = testing::make_corpus_pair(rng, 30);
    const auto back = parse_version(serialize_version(cp.old_set), {}, "synthetic", "v1");
    REQUIRE(back.size() == cp.old_set.size());
    for (const auto& f : cp.old_set.files()) {
      const auto* g = back.find(f.path);
      REQUIRE(g != nullptr);
      CHECK(g->label == f.label);
      CHECK(g->source == f.source);
    }
  }
}

TEST_CASE("toy fixture loads") {
  const auto v1 = load_version(fixture("toy-1.0.csv"), {}, "toy");
  const auto v2 = load_version(fixture("toy-1.1.csv"), {}, "toy");
  CHECK(v1.version_id() == "toy-1.0");
  CHECK(v1.size() == 7);
  CHECK(v2.size() == 7);
}
