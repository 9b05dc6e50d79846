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

// Pseudo-probabilities of unit sequences, all in natural-log domain.
//
// Two scoring routes are provided: left-to-right chain-rule scoring with a
// causal model (the n-gram controls implement it), and span scoring with a
// masked model that sums log P(q_i..q_{i+M_d} | rest) over windows starting
// every delta_t tokens.

#ifndef ZRC_SCORING_HPP_
#define ZRC_SCORING_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "zrc/io_formats.hpp"

namespace zrc {

struct PseudoProbability {
  double log_score = 0.0;
};

struct SpanConfig {
  std::int32_t span = 15;    // M_d: a window covers span + 1 tokens
  std::int32_t stride = 5;   // delta_t
};

// ---------------------------------------------------------------------------
// Causal scoring

class CausalScorer {
 public:
  virtual ~CausalScorer() = default;
  /// log P(next | history), history being all tokens before `next`.
  virtual double LogProb(std::span<const std::int32_t> history, std::int32_t next) const = 0;
  /// log P(end | whole sequence), or nothing for models without an end symbol.
  virtual std::optional<double> LogProbEnd(std::span<const std::int32_t> sequence) const {
    (void)sequence;
    return std::nullopt;
  }
};

/// Sum of log P(q_i | q_1..q_{i-1}), plus the end-of-sequence term when the
/// model has one.
PseudoProbability ChainRuleLogProb(const CausalScorer& model, const UnitSequence& seq);

/// Additive-smoothed n-gram over a closed unit vocabulary.
///
/// P(u | h) = (count(h, u) + alpha) / (count(h) + alpha * V), where V counts
/// the training units plus the end symbol. Sequences are padded with n-1
/// start symbols and one end symbol.
class NgramModel : public CausalScorer {
 public:
  static constexpr std::int32_t kStart = -1;
  static constexpr std::int32_t kEnd = -2;

  NgramModel() = default;

  static NgramModel Train(const std::vector<UnitSequence>& corpus, std::int32_t order,
                          double alpha = 1.0);

  std::int32_t order() const { return order_; }
  double alpha() const { return alpha_; }
  const std::set<std::int32_t>& vocabulary() const { return vocabulary_; }
  /// Vocabulary plus end symbol.
  std::size_t outcome_count() const { return vocabulary_.size() + 1; }

  /// P(next | context) where context holds the last order-1 tokens (start
  /// padded). `next` may be kEnd.
  double Prob(std::span<const std::int32_t> context, std::int32_t next) const;
  double LogProb(std::span<const std::int32_t> history, std::int32_t next) const override;
  std::optional<double> LogProbEnd(std::span<const std::int32_t> sequence) const override;

  /// Contexts seen in training, each as order-1 padded tokens.
  std::vector<std::vector<std::int32_t>> ObservedContexts() const;

  void Save(const std::filesystem::path& path) const;
  static NgramModel Load(const std::filesystem::path& path);
  std::string ToJson() const;
  static NgramModel FromJson(const std::string& text);

 private:
  std::vector<std::int32_t> Context(std::span<const std::int32_t> history) const;
  void CheckToken(std::int32_t token) const;

  std::int32_t order_ = 1;
  double alpha_ = 1.0;
  std::set<std::int32_t> vocabulary_;
  std::map<std::vector<std::int32_t>, std::map<std::int32_t, std::uint64_t>> counts_;
  std::map<std::vector<std::int32_t>, std::uint64_t> context_totals_;
};

// ---------------------------------------------------------------------------
// Masked (span) scoring

class MaskedWindowScorer {
 public:
  virtual ~MaskedWindowScorer() = default;
  /// log P(q_first..q_last | every other token of seq), 1-based inclusive.
  virtual double WindowLogProb(const UnitSequence& seq, std::size_t first,
                               std::size_t last) const = 0;
};

/// Windows the span score evaluates: (first, last), 1-based inclusive.
std::vector<std::pair<std::size_t, std::size_t>> SpanWindows(std::size_t length,
                                                              const SpanConfig& config);

/// Sum of window log-probabilities; with `per_token` the sum is divided by
/// the sequence length.
PseudoProbability SpanPseudoProb(const MaskedWindowScorer& scorer, const UnitSequence& seq,
                                 const SpanConfig& config, bool per_token = false);

/// Exact conditionals from an explicit joint distribution over fixed-length
/// sequences. Meant for tests and small synthetic checks.
class JointTableScorer : public MaskedWindowScorer {
 public:
  JointTableScorer(std::vector<std::int32_t> vocabulary,
                   std::map<std::vector<std::int32_t>, double> joint);
  double WindowLogProb(const UnitSequence& seq, std::size_t first,
                       std::size_t last) const override;

 private:
  std::vector<std::int32_t> vocabulary_;
  std::map<std::vector<std::int32_t>, double> joint_;
};

/// Scores precomputed by an external masked model, keyed by (utt_id, i, j).
/// File format: TSV "utt_id i j log_p" with an optional header line.
class ExternalWindowScorer : public MaskedWindowScorer {
 public:
  ExternalWindowScorer() = default;
  static ExternalWindowScorer Load(const std::filesystem::path& path);
  void Set(const std::string& utt_id, std::size_t first, std::size_t last, double log_p);
  double WindowLogProb(const UnitSequence& seq, std::size_t first,
                       std::size_t last) const override;

 private:
  std::map<std::tuple<std::string, std::size_t, std::size_t>, double> table_;
};

}  // namespace zrc

#endif  // ZRC_SCORING_HPP_
