// Copyright 2026 The zrc-eval Authors.
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

#include <atomic>
#include <cstdlib>
#include <numeric>

#include "doctest.h"
#include "zrc/common.hpp"

using zrc::Error;
using zrc::ErrorKind;
using zrc::Matrix;

TEST_CASE("matrix rows, append and range") {
  Matrix m = Matrix::FromRows({{1, 2}, {3, 4}, {5, 6}});
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 2);
  CHECK(m(2, 1) == 6);
  m.AppendRow(std::vector<double>{7, 8});
  CHECK(m.rows() == 4);
  const Matrix mid = m.RowRange(1, 3);
  CHECK(mid == Matrix::FromRows({{3, 4}, {5, 6}}));
  CHECK_THROWS_AS(m.AppendRow(std::vector<double>{1}), Error);
}

TEST_CASE("rng is reproducible and in range") {
  zrc::Rng a(123), b(123), c(124);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.Next();
    CHECK(x == b.Next());
    differs |= x != c.Next();
  }
  CHECK(differs);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.Uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(a.Below(7) < 7);
  }
}

TEST_CASE("shuffle is a permutation") {
  zrc::Rng rng(5);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  rng.Shuffle(v);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) CHECK(sorted[static_cast<std::size_t>(i)] == i);
}

TEST_CASE("parallel for covers every index and rethrows the first failure") {
  std::vector<std::atomic<int>> hits(257);
  zrc::ParallelFor(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) CHECK(h.load() == 1);

  try {
    zrc::ParallelFor(100, 3, [](std::size_t i) {
      if (i == 17 || i == 80) throw std::runtime_error("boom " + std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "boom 17");
  }
}

TEST_CASE("thread count falls back to the environment") {
  CHECK(zrc::ResolveThreads(3) == 3);
  ::setenv("ZRC_EVAL_THREADS", "5", 1);
  CHECK(zrc::ResolveThreads(0) == 5);
  ::unsetenv("ZRC_EVAL_THREADS");
  CHECK(zrc::ResolveThreads(0) == 1);
}

TEST_CASE("number parsing is strict") {
  CHECK(zrc::ParseDouble("0.25", "x") == 0.25);
  CHECK(zrc::ParseDouble("-1e-3", "x") == -1e-3);
  CHECK(zrc::ParseInt("42", "x") == 42);
  for (const char* bad : {"", "1.5x", "abc", " 1"}) {
    try {
      zrc::ParseDouble(bad, "line 9");
      FAIL("accepted " << bad);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kParse);
      CHECK(std::string(e.what()).find("line 9") != std::string::npos);
    }
  }
  CHECK_THROWS_AS(zrc::ParseInt("4.0", "x"), Error);
}

TEST_CASE("fixed formatting") {
  CHECK(zrc::FormatFixed6(0.625) == "0.625000");
  CHECK(zrc::FormatFixed6(-0.0) == "0.000000");
  CHECK(zrc::FormatFixed6(-1e-9) == "0.000000");
  CHECK(zrc::FormatFixed6(100.0) == "100.000000");
}

TEST_CASE("splitting") {
  auto w = zrc::SplitWhitespace("  a\tb  c ");
  REQUIRE(w.size() == 3);
  CHECK(w[2] == "c");
  auto t = zrc::SplitChar("a\t\tb\r", '\t');
  REQUIRE(t.size() == 3);
  CHECK(t[1].empty());
  CHECK(t[2] == "b");
}

TEST_CASE("warnings go to the installed sink") {
  std::vector<std::string> seen;
  zrc::SetWarningSink([&](std::string_view m) { seen.emplace_back(m); });
  zrc::Warn("hello");
  zrc::SetWarningSink(nullptr);
  REQUIRE(seen.size() == 1);
  CHECK(seen[0] == "hello");
}
