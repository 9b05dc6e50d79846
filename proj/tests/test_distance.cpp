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

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "zrc/distance.hpp"

using namespace zrc;
using doctest::Approx;

namespace {

Matrix RandomFrames(Rng& rng, std::size_t t, std::size_t d) {
  Matrix m(t, d);
  for (auto& v : m.data()) v = rng.Uniform() * 2.0 - 1.0;
  return m;
}

Matrix RandomPosteriors(Rng& rng, std::size_t t, std::size_t d) {
  Matrix m(t, d);
  for (std::size_t r = 0; r < t; ++r) {
    double sum = 0.0;
    for (auto& v : m.row(r)) sum += v = rng.Uniform() + 1e-3;
    for (auto& v : m.row(r)) v /= sum;
  }
  return m;
}

double Kl(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = std::max(p[i], 1e-10), b = std::max(q[i], 1e-10);
    s += a * std::log(a / b);
  }
  return std::max(0.0, s);
}

}  // namespace

TEST_CASE("angular frame distance") {
  const std::vector<double> e1{1, 0}, e2{0, 1}, two{2, 0}, neg{-1, 0}, zero{0, 0};
  CHECK(AngularFrameDistance(e1, e1) == 0.0);
  CHECK(AngularFrameDistance(e1, e2) == Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(AngularFrameDistance(two, neg) == Approx(std::numbers::pi).epsilon(1e-15));
  CHECK_THROWS_AS(AngularFrameDistance(e1, zero), Error);
  CHECK_THROWS_AS(AngularFrameDistance(e1, std::vector<double>{1, 0, 0}), Error);
}

TEST_CASE("KL frame distance") {
  const std::vector<double> p{0.5, 0.5}, q{0.25, 0.75}, one{1, 0};
  CHECK(KlFrameDistance(p, p) == 0.0);
  CHECK(KlFrameDistance(p, q) ==
        Approx(0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0)).epsilon(1e-14));
  CHECK(std::abs(KlFrameDistance(p, q) - 0.14384) < 1e-5);
  CHECK(KlFrameDistance(one, p) == Approx(Kl(one, p)).epsilon(1e-14));
  CHECK(std::abs(KlFrameDistance(one, p) - std::log(2.0)) < 1e-8);
  CHECK_THROWS_AS(KlFrameDistance(std::vector<double>{0.7, 0.7}, p), Error);
  CHECK_THROWS_AS(KlFrameDistance(std::vector<double>{-0.5, 1.5}, p), Error);
}

TEST_CASE("DTW on small hand cases") {
  const Matrix x = Matrix::FromRows({{1, 0}});
  const Matrix y = Matrix::FromRows({{1, 0}, {0, 1}});
  CHECK(DtwDistance(x, y, FrameMetric::kAngular) ==
        Approx(std::numbers::pi / 4).epsilon(1e-15));
  CHECK(DtwDistance(y, y, FrameMetric::kAngular) == 0.0);
  CHECK_THROWS_AS(DtwDistance(x, Matrix::FromRows({{1, 0, 0}}), FrameMetric::kAngular), Error);
  CHECK_THROWS_AS(DtwDistance(x, Matrix(0, 2), FrameMetric::kAngular), Error);
  CHECK_THROWS_AS(DtwDistance(x, Matrix::FromRows({{0, 0}}), FrameMetric::kAngular), Error);
}

TEST_CASE("DTW equals the exhaustive path oracle") {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const auto d = 1 + rng.Below(4);
    const Matrix x = RandomFrames(rng, 1 + rng.Below(6), d);
    const Matrix y = RandomFrames(rng, 1 + rng.Below(6), d);
    const auto oracle = oracle::ExhaustiveDtw(oracle::ToFrames(x), oracle::ToFrames(y),
                                              oracle::Angular);
    CHECK(std::abs(DtwDistance(x, y, FrameMetric::kAngular) - oracle.preferred_mean) <= 1e-12);
  }
}

TEST_CASE("DTW with KL matches the oracle and is asymmetric") {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = 2 + rng.Below(3);
    const Matrix x = RandomPosteriors(rng, 1 + rng.Below(5), d);
    const Matrix y = RandomPosteriors(rng, 1 + rng.Below(5), d);
    const auto oracle = oracle::ExhaustiveDtw(oracle::ToFrames(x), oracle::ToFrames(y), Kl);
    CHECK(std::abs(DtwDistance(x, y, FrameMetric::kKl) - oracle.preferred_mean) <= 1e-12);
  }
  const Matrix nonprob = Matrix::FromRows({{2, 0}});
  CHECK_THROWS_AS(DtwDistance(nonprob, nonprob, FrameMetric::kKl), Error);
}

TEST_CASE("DTW is symmetric under angular distance and zero on itself") {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix x = RandomFrames(rng, 1 + rng.Below(8), 3);
    const Matrix y = RandomFrames(rng, 1 + rng.Below(8), 3);
    CHECK(DtwDistance(x, y, FrameMetric::kAngular) ==
          Approx(DtwDistance(y, x, FrameMetric::kAngular)).epsilon(1e-12));
    CHECK(DtwDistance(x, x, FrameMetric::kAngular) < 1e-7);
  }
}

TEST_CASE("metric names") {
  CHECK(ParseFrameMetric("angular") == FrameMetric::kAngular);
  CHECK(FrameMetricName(FrameMetric::kKl) == "kl");
  CHECK_THROWS_AS(ParseFrameMetric("cosine"), Error);
}
