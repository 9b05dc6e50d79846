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

// Stochastic greedy sampler that builds accepted/rejected pairs whose
// accuracy under each of M control scores sits as close to 50% as possible.
//
// The balance objective of a list of pairs is sum_m |acc_m - 0.5| where
// acc_m is the fraction of pairs whose anchor outscores its counterpart on
// score m (ties count one half).

#ifndef ZRC_SAMPLER_HPP_
#define ZRC_SAMPLER_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "zrc/common.hpp"

namespace zrc {

struct Candidate {
  std::string id;
  std::vector<double> scores;  // M
};

struct Anchor {
  std::string id;
  std::string stratum;
  std::vector<double> scores;  // M
  std::vector<Candidate> candidates;
};

struct CandidateSet {
  std::size_t score_count = 0;  // M
  std::vector<Anchor> anchors;

  /// Throws kValidation unless M >= 1, every anchor has a candidate and all
  /// score vectors have M finite entries.
  void Validate() const;
};

/// Incrementally maintained objective. Credits are doubled so ties stay
/// integral and the objective is exact.
class BalanceTally {
 public:
  explicit BalanceTally(std::size_t score_count) : credit_(score_count, 0) {}

  void Add(std::span<const double> anchor, std::span<const double> other);
  /// Objective after a hypothetical Add, without changing the tally.
  double ObjectiveWith(std::span<const double> anchor, std::span<const double> other) const;
  double Objective() const;
  std::size_t pairs() const { return pairs_; }
  /// Accuracy of score m over the tallied pairs.
  double Accuracy(std::size_t m) const;

 private:
  std::vector<std::int64_t> credit_;
  std::size_t pairs_ = 0;
};

struct Assignment {
  std::vector<std::int64_t> chosen;  // candidate index per anchor, -1 if unassigned
  double objective = 0.0;            // over all assigned anchors
  double stratum_objective = 0.0;    // sum of per-stratum objectives (selection key)
  std::uint64_t seed = 0;
  std::size_t restart = 0;
};

/// Objective over the assigned anchors only; M * 0.5 when none is assigned.
double BalanceObjective(const Assignment& assignment, const CandidateSet& set);
double BalanceObjective(const std::vector<std::int64_t>& chosen, const CandidateSet& set);

struct SamplerOptions {
  std::uint64_t seed = 0;
  std::size_t restarts = 1;
  std::size_t threads = 1;
  bool stratify = true;
};

/// One counterpart per anchor. Within each stratum anchors are visited in a
/// seeded random order; candidates are tried in seeded random order and the
/// first one that does not increase the stratum objective is kept, otherwise
/// a random candidate is taken. Restart r uses seed ^ r; the restart with the
/// lowest stratum objective (then lowest index) is returned.
Assignment SampleWordPairs(const CandidateSet& set, const SamplerOptions& options);

struct SentencePair {
  std::string id;
  std::string paradigm;
  std::vector<double> accepted_scores;  // M
  std::vector<double> rejected_scores;  // M
};

struct SentenceSelection {
  std::vector<std::size_t> chosen;  // pool indices, in selection order
  double objective = 0.0;
  double stratum_objective = 0.0;
  std::uint64_t seed = 0;
  std::size_t restart = 0;
};

double SentenceObjective(const std::vector<SentencePair>& pool,
                         const std::vector<std::size_t>& chosen);

/// Picks `target` pairs from the pool. Each step tries unchosen pairs in
/// seeded random order and keeps the first that does not increase the
/// objective; if none qualifies a random unchosen pair is added. With
/// `stratify` the target is split across paradigms (largest remainder) and
/// each paradigm is sampled on its own.
SentenceSelection SampleSentencePairs(const std::vector<SentencePair>& pool,
                                      std::size_t target, const SamplerOptions& options);

/// Candidate TSV: header "anchor_id stratum candidate_id s_1 .. s_M"; anchor
/// rows use candidate_id "@self".
CandidateSet ReadCandidateSet(const std::filesystem::path& path);
void WriteCandidateSet(const CandidateSet& set, const std::filesystem::path& path);
/// Assignment TSV: header "anchor_id stratum candidate_id", one row per anchor.
void WriteAssignment(const Assignment& assignment, const CandidateSet& set,
                     const std::filesystem::path& path);

/// Sentence pool TSV: header "pair_id paradigm acc_1..acc_M rej_1..rej_M".
std::vector<SentencePair> ReadSentencePool(const std::filesystem::path& path);
void WriteSentenceSelection(const SentenceSelection& selection,
                            const std::vector<SentencePair>& pool,
                            const std::filesystem::path& path);

}  // namespace zrc

#endif  // ZRC_SAMPLER_HPP_
