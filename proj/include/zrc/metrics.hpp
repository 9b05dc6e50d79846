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

// Lexical/syntactic paired accuracy and semantic similarity scoring.

#ifndef ZRC_METRICS_HPP_
#define ZRC_METRICS_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "zrc/io_formats.hpp"

namespace zrc {

enum class TiePolicy { kHalf, kZero };
TiePolicy ParseTiePolicy(std::string_view name);
std::string_view TiePolicyName(TiePolicy policy);

struct AccuracyReport {
  double overall = 0.0;
  std::int64_t pair_count = 0;
  std::int64_t tie_count = 0;
  /// "tag=value" -> accuracy over the pairs carrying that tag value.
  std::map<std::string, double> per_tag;
  std::map<std::string, std::int64_t> per_tag_count;
};

/// 1 when score(accepted) > score(rejected), tie credit per policy, 0 otherwise.
AccuracyReport PairedAccuracy(const std::vector<ScoredPair>& pairs,
                              const std::map<std::string, double>& scores,
                              TiePolicy ties = TiePolicy::kHalf);

MetricReport AccuracyMetricReport(const std::string& metric, const AccuracyReport& report);

enum class Pooling { kMean, kMax, kMin };
std::string_view PoolingName(Pooling pooling);
Pooling ParsePooling(std::string_view name);
inline constexpr Pooling kAllPoolings[] = {Pooling::kMean, Pooling::kMax, Pooling::kMin};

struct PooledEmbedding {
  std::vector<double> vector;
  Pooling pooling = Pooling::kMean;
  std::int32_t layer = 0;
  std::string voice;  // empty for natural speech
};

/// Elementwise mean/max/min over the rows of `hidden`.
std::vector<double> Pool(const Matrix& hidden, Pooling pooling);

/// Cosine of the angle between the two vectors.
double SemanticDistance(const PooledEmbedding& x, const PooledEmbedding& y);
double CosineSimilarity(std::span<const double> x, std::span<const double> y);

/// Spearman rank correlation with average ranks for ties. Throws kDomain on
/// fewer than two points or a constant input.
double SpearmanRho(std::span<const double> x, std::span<const double> y);
std::vector<double> AverageRanks(std::span<const double> values);

enum class SimilaritySubset { kSynthetic, kNatural };
SimilaritySubset ParseSimilaritySubset(std::string_view name);
std::string_view SimilaritySubsetName(SimilaritySubset subset);

using WordEmbeddings = std::map<std::string, std::vector<PooledEmbedding>>;

/// Per-record model similarity: mean cosine over same-voice token pairs
/// (synthetic) or over all cross-word token pairs (natural).
double RecordSimilarity(const SimilarityRecord& record, const WordEmbeddings& reprs,
                        SimilaritySubset subset);

/// 100 x Spearman between model similarities and human scores.
double SimilarityScore(const std::vector<SimilarityRecord>& records,
                       const WordEmbeddings& reprs, SimilaritySubset subset);

/// Hidden outputs of one layer: word -> (voice, T x D matrix) per utterance.
struct HiddenToken {
  std::string voice;
  Matrix hidden;
};
using LayerOutputs = std::map<std::string, std::vector<HiddenToken>>;

WordEmbeddings PoolLayer(const LayerOutputs& layer, Pooling pooling, std::int32_t layer_index);

struct SweepResult {
  std::int32_t layer = 0;
  Pooling pooling = Pooling::kMean;
  double score = 0.0;
  /// Score of every (layer, pooling) tried, keyed "layer<i>/<pooling>".
  std::map<std::string, double> all_scores;
};

/// Best (layer, pooling) on the given records. Ties go to the lower layer,
/// then to mean < max < min.
SweepResult LayerSweep(const std::vector<LayerOutputs>& layers,
                       std::span<const Pooling> poolings,
                       const std::vector<SimilarityRecord>& records, SimilaritySubset subset);

}  // namespace zrc

#endif  // ZRC_METRICS_HPP_
