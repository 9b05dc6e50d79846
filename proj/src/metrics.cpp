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

#include "zrc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace zrc {

TiePolicy ParseTiePolicy(std::string_view name) {
  if (name == "half") return TiePolicy::kHalf;
  if (name == "zero") return TiePolicy::kZero;
  throw Error(ErrorKind::kValidation, "unknown tie policy '" + std::string(name) + "'");
}

std::string_view TiePolicyName(TiePolicy policy) {
  return policy == TiePolicy::kHalf ? "half" : "zero";
}

AccuracyReport PairedAccuracy(const std::vector<ScoredPair>& pairs,
                              const std::map<std::string, double>& scores, TiePolicy ties) {
  if (pairs.empty()) throw Error(ErrorKind::kValidation, "no pairs to score");
  std::vector<const ScoredPair*> order;
  order.reserve(pairs.size());
  for (const auto& p : pairs) order.push_back(&p);
  std::sort(order.begin(), order.end(),
            [](const ScoredPair* a, const ScoredPair* b) { return a->pair_id < b->pair_id; });

  auto lookup = [&](const ScoredPair& p, const std::string& id) {
    auto it = scores.find(id);
    if (it == scores.end()) {
      throw Error(ErrorKind::kNotFound, "pair " + p.pair_id + ": no score for '" + id + "'");
    }
    return it->second;
  };

  // Credits are doubled so a half point stays an integer.
  std::int64_t credit = 0;
  std::map<std::string, std::int64_t> tag_credit;
  AccuracyReport report;
  for (const ScoredPair* p : order) {
    const double acc = lookup(*p, p->accepted_id);
    const double rej = lookup(*p, p->rejected_id);
    std::int64_t c = 0;
    if (acc > rej) {
      c = 2;
    } else if (acc == rej) {
      ++report.tie_count;
      c = ties == TiePolicy::kHalf ? 1 : 0;
    }
    credit += c;
    for (const auto& [k, v] : p->tags) {
      const std::string key = k + "=" + v;
      tag_credit[key] += c;
      report.per_tag_count[key] += 1;
    }
  }
  report.pair_count = static_cast<std::int64_t>(pairs.size());
  report.overall = static_cast<double>(credit) / (2.0 * static_cast<double>(report.pair_count));
  for (const auto& [key, c] : tag_credit) {
    report.per_tag[key] =
        static_cast<double>(c) / (2.0 * static_cast<double>(report.per_tag_count[key]));
  }
  return report;
}

MetricReport AccuracyMetricReport(const std::string& metric, const AccuracyReport& report) {
  MetricReport r;
  r.metric = metric;
  r.aggregate = report.overall;
  r.subsets = report.per_tag;
  r.counts["pairs"] = report.pair_count;
  r.counts["ties"] = report.tie_count;
  for (const auto& [k, n] : report.per_tag_count) r.counts["pairs." + k] = n;
  return r;
}

std::string_view PoolingName(Pooling pooling) {
  switch (pooling) {
    case Pooling::kMean: return "mean";
    case Pooling::kMax: return "max";
    case Pooling::kMin: return "min";
  }
  return "mean";
}

Pooling ParsePooling(std::string_view name) {
  if (name == "mean") return Pooling::kMean;
  if (name == "max") return Pooling::kMax;
  if (name == "min") return Pooling::kMin;
  throw Error(ErrorKind::kValidation, "unknown pooling '" + std::string(name) + "'");
}

std::vector<double> Pool(const Matrix& hidden, Pooling pooling) {
  if (hidden.rows() == 0) throw Error(ErrorKind::kValidation, "cannot pool an empty sequence");
  const auto first = hidden.row(0);
  std::vector<double> out(first.begin(), first.end());
  for (std::size_t t = 1; t < hidden.rows(); ++t) {
    const auto row = hidden.row(t);
    for (std::size_t d = 0; d < out.size(); ++d) {
      switch (pooling) {
        case Pooling::kMean: out[d] += row[d]; break;
        case Pooling::kMax: out[d] = std::max(out[d], row[d]); break;
        case Pooling::kMin: out[d] = std::min(out[d], row[d]); break;
      }
    }
  }
  if (pooling == Pooling::kMean) {
    for (double& v : out) v /= static_cast<double>(hidden.rows());
  }
  return out;
}

double CosineSimilarity(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "cosine similarity on vectors of unequal size");
  }
  double xy = 0.0, xx = 0.0, yy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xy += x[i] * y[i];
    xx += x[i] * x[i];
    yy += y[i] * y[i];
  }
  if (!(xx > 0.0) || !(yy > 0.0)) {
    throw Error(ErrorKind::kDomain, "cosine similarity undefined for a zero vector");
  }
  return std::clamp(xy / (std::sqrt(xx) * std::sqrt(yy)), -1.0, 1.0);
}

double SemanticDistance(const PooledEmbedding& x, const PooledEmbedding& y) {
  return CosineSimilarity(x.vector, y.vector);
}

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && values[idx[j + 1]] == values[idx[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double SpearmanRho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "Spearman on samples of unequal size");
  }
  if (x.size() < 2) throw Error(ErrorKind::kDomain, "Spearman needs at least two points");
  const auto rx = AverageRanks(x);
  const auto ry = AverageRanks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorKind::kDomain, "Spearman undefined for a constant sample");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

SimilaritySubset ParseSimilaritySubset(std::string_view name) {
  if (name == "synthetic") return SimilaritySubset::kSynthetic;
  if (name == "natural") return SimilaritySubset::kNatural;
  throw Error(ErrorKind::kValidation, "unknown similarity subset '" + std::string(name) + "'");
}

std::string_view SimilaritySubsetName(SimilaritySubset subset) {
  return subset == SimilaritySubset::kSynthetic ? "synthetic" : "natural";
}

double RecordSimilarity(const SimilarityRecord& record, const WordEmbeddings& reprs,
                        SimilaritySubset subset) {
  auto find = [&](const std::string& word) -> const std::vector<PooledEmbedding>& {
    auto it = reprs.find(word);
    if (it == reprs.end() || it->second.empty()) {
      throw Error(ErrorKind::kNotFound, "no representation for word '" + word + "'");
    }
    return it->second;
  };
  const auto& a = find(record.word_a);
  const auto& b = find(record.word_b);
  const bool same_word = record.word_a == record.word_b;
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (same_word && i == j) continue;
      if (subset == SimilaritySubset::kSynthetic && a[i].voice != b[j].voice) continue;
      sum += SemanticDistance(a[i], b[j]);
      ++n;
    }
  }
  if (n == 0) {
    throw Error(ErrorKind::kNotFound, "no token pair to compare for (" + record.word_a + ", " +
                                          record.word_b + ")");
  }
  return sum / static_cast<double>(n);
}

double SimilarityScore(const std::vector<SimilarityRecord>& records,
                       const WordEmbeddings& reprs, SimilaritySubset subset) {
  if (records.size() < 2) {
    throw Error(ErrorKind::kValidation, "similarity score needs at least two records");
  }
  std::vector<double> model, human;
  for (const auto& r : records) {
    model.push_back(RecordSimilarity(r, reprs, subset));
    human.push_back(r.human_score);
  }
  return 100.0 * SpearmanRho(model, human);
}

WordEmbeddings PoolLayer(const LayerOutputs& layer, Pooling pooling, std::int32_t layer_index) {
  WordEmbeddings out;
  for (const auto& [word, tokens] : layer) {
    auto& dst = out[word];
    for (const auto& tok : tokens) {
      dst.push_back(PooledEmbedding{Pool(tok.hidden, pooling), pooling, layer_index, tok.voice});
    }
  }
  return out;
}

SweepResult LayerSweep(const std::vector<LayerOutputs>& layers,
                       std::span<const Pooling> poolings,
                       const std::vector<SimilarityRecord>& records, SimilaritySubset subset) {
  if (layers.empty()) throw Error(ErrorKind::kValidation, "layer sweep needs at least one layer");
  if (poolings.empty()) throw Error(ErrorKind::kValidation, "layer sweep needs a pooling");
  std::vector<Pooling> order(poolings.begin(), poolings.end());
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  SweepResult best;
  bool have = false;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (Pooling p : order) {
      const auto li = static_cast<std::int32_t>(l);
      const double score = SimilarityScore(records, PoolLayer(layers[l], p, li), subset);
      best.all_scores["layer" + std::to_string(l) + "/" + std::string(PoolingName(p))] = score;
      if (!have || score > best.score) {
        best.layer = li;
        best.pooling = p;
        best.score = score;
        have = true;
      }
    }
  }
  return best;
}

}  // namespace zrc
