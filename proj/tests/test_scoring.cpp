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

#include "doctest.h"
#include "minibench.hpp"
#include "oracles.hpp"
#include "zrc/scoring.hpp"

using namespace zrc;
using doctest::Approx;

namespace {

std::map<std::vector<std::int32_t>, double> RandomJoint(Rng& rng, std::size_t length) {
  std::map<std::vector<std::int32_t>, double> joint;
  double total = 0.0;
  for (std::uint32_t code = 0; code < (1u << length); ++code) {
    std::vector<std::int32_t> seq(length);
    for (std::size_t i = 0; i < length; ++i) seq[i] = static_cast<std::int32_t>(code >> i & 1);
    total += joint[seq] = 0.05 + rng.Uniform();
  }
  for (auto& [seq, p] : joint) p /= total;
  return joint;
}

// Hand-written unigram with known counts.
class FixedUnigram : public CausalScorer {
 public:
  double LogProb(std::span<const std::int32_t>, std::int32_t next) const override {
    return std::log(next == 0 ? 0.25 : 0.5);
  }
  std::optional<double> LogProbEnd(std::span<const std::int32_t>) const override {
    return std::log(0.25);
  }
};

}  // namespace

TEST_CASE("chain rule under independence") {
  FixedUnigram m;
  CHECK(ChainRuleLogProb(m, UnitSequence{"u", {0, 1}}).log_score ==
        Approx(std::log(0.25) + std::log(0.5) + std::log(0.25)));
}

TEST_CASE("unigram counts with padding") {
  const auto m = NgramModel::Train({{"a", {0, 1}}, {"b", {0, 1}}}, 1, 1e-9);
  const std::vector<std::int32_t> none;
  // Counts: 0 twice, 1 twice, end twice; total 6.
  CHECK(m.Prob(none, 0) == Approx(1.0 / 3.0));
  CHECK(m.Prob(none, 1) == Approx(1.0 / 3.0));
  CHECK(m.Prob(none, NgramModel::kEnd) == Approx(1.0 / 3.0));
  CHECK(m.Prob(none, 0) / (m.Prob(none, 0) + m.Prob(none, 1)) == Approx(0.5));
  CHECK(ChainRuleLogProb(m, UnitSequence{"x", {0, 1}}).log_score ==
        Approx(3.0 * std::log(1.0 / 3.0)).epsilon(1e-8));
}

TEST_CASE("bigram with known counts") {
  // Corpus {[0,1,0,1]}: contexts <s>:{0:1}, 0:{1:2}, 1:{0:1, </s>:1}. V = 2 + end.
  const auto m = NgramModel::Train({{"a", {0, 1, 0, 1}}}, 2, 1.0);
  const std::vector<std::int32_t> zero{0};
  CHECK(m.Prob(zero, 1) > m.Prob(zero, 0));
  CHECK(m.Prob(zero, 1) > m.Prob(zero, NgramModel::kEnd));
  CHECK(m.Prob(zero, 1) == Approx(3.0 / 5.0));
  // P(0 | <s>) = 2/4, P(1 | 0) = 3/5, P(</s> | 1) = 2/5.
  CHECK(ChainRuleLogProb(m, UnitSequence{"q", {0, 1}}).log_score ==
        Approx(std::log(2.0 / 4.0) + std::log(3.0 / 5.0) + std::log(2.0 / 5.0)));
}

TEST_CASE("conditionals are normalized for every observed context") {
  Rng rng(6);
  std::vector<UnitSequence> corpus;
  for (int i = 0; i < 50; ++i) {
    UnitSequence s{"s" + std::to_string(i), {}};
    for (std::size_t t = 0; t < 1 + rng.Below(8); ++t) s.units.push_back(static_cast<std::int32_t>(rng.Below(5)));
    corpus.push_back(s);
  }
  for (std::int32_t order : {1, 2, 3}) {
    for (double alpha : {0.01, 1.0, 7.5}) {
      const auto m = NgramModel::Train(corpus, order, alpha);
      for (const auto& ctx : m.ObservedContexts()) {
        double sum = m.Prob(ctx, NgramModel::kEnd);
        for (auto u : m.vocabulary()) sum += m.Prob(ctx, u);
        CHECK(std::abs(sum - 1.0) <= 1e-9);
      }
    }
  }
}

TEST_CASE("large alpha flattens the unigram") {
  const auto m = NgramModel::Train({{"a", {0, 0, 0, 1}}, {"b", {2}}}, 1, 1e9);
  const std::vector<std::int32_t> none;
  double lo = 1, hi = 0;
  for (std::int32_t u : {0, 1, 2, NgramModel::kEnd}) {
    lo = std::min(lo, m.Prob(none, u));
    hi = std::max(hi, m.Prob(none, u));
  }
  CHECK(hi / lo == Approx(1.0).epsilon(1e-8));
  CHECK(hi == Approx(0.25).epsilon(1e-8));
}

TEST_CASE("n-gram errors and persistence") {
  CHECK_THROWS_AS(NgramModel::Train({}, 2), Error);
  CHECK_THROWS_AS(NgramModel::Train({{"a", {1}}}, 0), Error);
  const auto m = NgramModel::Train({{"a", {1, 2, 3}}, {"b", {3, 2}}}, 3, 0.5);
  try {
    ChainRuleLogProb(m, UnitSequence{"x", {1, 9}});
    FAIL("expected OOV error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kValidation);
  }
  const auto dir = testing::TempDir("ngram");
  m.Save(dir / "m.json");
  const auto back = NgramModel::Load(dir / "m.json");
  CHECK(back.ToJson() == m.ToJson());
  for (const auto& s : std::vector<UnitSequence>{{"p", {1, 2}}, {"q", {3, 3, 3, 1}}}) {
    CHECK(ChainRuleLogProb(back, s).log_score == ChainRuleLogProb(m, s).log_score);
  }
  CHECK_THROWS_AS(NgramModel::FromJson("{\"order\": 2}"), Error);
}

TEST_CASE("span windows") {
  using W = std::vector<std::pair<std::size_t, std::size_t>>;
  CHECK(SpanWindows(3, SpanConfig{15, 5}) == W{{1, 3}});
  CHECK(SpanWindows(6, SpanConfig{1, 5}) == W{{1, 2}, {6, 6}});
  CHECK(SpanWindows(7, SpanConfig{2, 2}) == W{{1, 3}, {3, 5}, {5, 7}, {7, 7}});
  CHECK_THROWS_AS(SpanWindows(0, SpanConfig{}), Error);
  CHECK_THROWS_AS(SpanWindows(4, SpanConfig{0, 1}), Error);
}

TEST_CASE("span score from a joint table, T=6, span 1, stride 5") {
  Rng rng(10);
  const auto joint = RandomJoint(rng, 6);
  const JointTableScorer scorer({0, 1}, joint);
  const UnitSequence seq{"u", {1, 0, 0, 1, 1, 0}};
  // P(q1 q2 | q3..q6) and P(q6 | q1..q5) straight from the table.
  double first_den = 0.0;
  for (int a : {0, 1})
    for (int b : {0, 1}) first_den += joint.at({a, b, 0, 1, 1, 0});
  const double last_den = joint.at({1, 0, 0, 1, 1, 0}) + joint.at({1, 0, 0, 1, 1, 1});
  const double p = joint.at(seq.units);
  CHECK(SpanPseudoProb(scorer, seq, SpanConfig{1, 5}).log_score ==
        Approx(std::log(p / first_den) + std::log(p / last_den)).epsilon(1e-13));
}

TEST_CASE("span score equals the product formula on every binary sequence") {
  Rng rng(11);
  for (std::size_t t = 1; t <= 6; ++t) {
    const auto joint = RandomJoint(rng, t);
    const JointTableScorer scorer({0, 1}, joint);
    for (const auto& [seq, p] : joint) {
      for (int span = 1; span <= 4; ++span)
        for (int stride = 1; stride <= 4; ++stride) {
          const double got = SpanPseudoProb(scorer, UnitSequence{"u", seq}, {span, stride}).log_score;
          CHECK(std::abs(got - oracle::SpanFromJoint(seq, joint, {0, 1}, span, stride)) <= 1e-12);
        }
    }
  }
}

TEST_CASE("window log-probabilities are not positive for normalized tables") {
  Rng rng(12);
  const auto joint = RandomJoint(rng, 4);
  const JointTableScorer scorer({0, 1}, joint);
  for (const auto& [seq, p] : joint)
    for (std::size_t i = 1; i <= 4; ++i)
      for (std::size_t j = i; j <= 4; ++j) CHECK(scorer.WindowLogProb({"u", seq}, i, j) <= 0.0);
}

TEST_CASE("per-token normalization divides by length") {
  ExternalWindowScorer s;
  s.Set("u", 1, 3, -3.0);
  s.Set("u", 3, 4, -1.0);
  const UnitSequence seq{"u", {5, 6, 7, 8}};
  CHECK(SpanPseudoProb(s, seq, {2, 2}).log_score == -4.0);
  CHECK(SpanPseudoProb(s, seq, {2, 2}, true).log_score == -1.0);
}

TEST_CASE("external window table") {
  const auto dir = testing::TempDir("windows");
  WriteTextFile(dir / "w.tsv", "utt_id\ti\tj\tlog_p\nu\t1\t3\t-2.5\n");
  const auto s = ExternalWindowScorer::Load(dir / "w.tsv");
  CHECK(s.WindowLogProb({"u", {1, 2, 3}}, 1, 3) == -2.5);
  try {
    SpanPseudoProb(s, UnitSequence{"u", {1, 2, 3, 4, 5, 6}}, {2, 5});
    FAIL("expected a missing-window error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNotFound);
    CHECK(std::string(e.what()).find("(u, 6, 6)") != std::string::npos);
  }
  WriteTextFile(dir / "bad.tsv", "u\t3\t1\t-1\n");
  CHECK_THROWS_AS(ExternalWindowScorer::Load(dir / "bad.tsv"), Error);
}
