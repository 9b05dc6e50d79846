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

#include "zrc/abx.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <tuple>
#include <utility>

namespace zrc {

std::string_view AbxModeName(AbxMode mode) {
  return mode == AbxMode::kWithin ? "within" : "across";
}

AbxMode ParseAbxMode(std::string_view name) {
  if (name == "within") return AbxMode::kWithin;
  if (name == "across") return AbxMode::kAcross;
  throw Error(ErrorKind::kValidation, "unknown ABX mode '" + std::string(name) + "'");
}

std::optional<double> AsymmetricAbxFromDistances(const Matrix& d_ax, const Matrix& d_bx,
                                                 bool x_is_a) {
  const std::size_t n_a = d_ax.rows();
  const std::size_t n_x = d_ax.cols();
  const std::size_t n_b = d_bx.rows();
  if (d_bx.cols() != n_x) {
    throw Error(ErrorKind::kDimensionMismatch, "ABX distance tables disagree on |X|");
  }
  if (x_is_a && n_a != n_x) {
    throw Error(ErrorKind::kDimensionMismatch, "within-category ABX needs a square A/X table");
  }
  // Doubled credit keeps the tally exact: 2 per error, 1 per tie.
  std::uint64_t credit = 0;
  std::uint64_t triplets = 0;
  for (std::size_t k = 0; k < n_x; ++k) {
    for (std::size_t i = 0; i < n_a; ++i) {
      if (x_is_a && i == k) continue;
      const double ax = d_ax(i, k);
      for (std::size_t j = 0; j < n_b; ++j) {
        const double bx = d_bx(j, k);
        if (bx < ax) {
          credit += 2;
        } else if (bx == ax) {
          credit += 1;
        }
        ++triplets;
      }
    }
  }
  if (triplets == 0) return std::nullopt;
  return static_cast<double>(credit) / (2.0 * static_cast<double>(triplets));
}

namespace {

std::string CellName(const AbxCategory& c) {
  return c.left + "-" + c.center + "-" + c.right + "/" + c.speaker;
}

Matrix DistanceTable(const std::vector<Matrix>& from, const std::vector<Matrix>& to,
                     const SequenceDistance& distance) {
  Matrix table(from.size(), to.size());
  for (std::size_t i = 0; i < from.size(); ++i)
    for (std::size_t k = 0; k < to.size(); ++k) table(i, k) = distance(from[i], to[k]);
  return table;
}

SequenceDistance DtwWith(FrameMetric metric) {
  return [metric](const Matrix& a, const Matrix& b) { return DtwDistance(a, b, metric); };
}

}  // namespace

std::optional<double> AsymmetricAbx(const AbxCategory& a, const AbxCategory& b,
                                    const SequenceDistance& distance) {
  if (a.size() < 2 || b.size() < 1) {
    Warn("skipping ABX cell " + CellName(a) + " vs " + CellName(b) + ": n_A=" +
         std::to_string(a.size()) + " (needs 2), n_B=" + std::to_string(b.size()));
    return std::nullopt;
  }
  return AsymmetricAbxFromDistances(DistanceTable(a.tokens, a.tokens, distance),
                                    DistanceTable(b.tokens, a.tokens, distance), true);
}

std::optional<double> AsymmetricAbx(const AbxCategory& a, const AbxCategory& b,
                                    FrameMetric metric) {
  return AsymmetricAbx(a, b, DtwWith(metric));
}

std::optional<double> AsymmetricAbxAcross(const AbxCategory& a, const AbxCategory& b,
                                          const AbxCategory& x,
                                          const SequenceDistance& distance) {
  if (a.size() == 0 || b.size() == 0 || x.size() == 0) {
    Warn("skipping across-speaker ABX cell " + CellName(a) + " vs " + CellName(b) +
         " with X from " + CellName(x) + ": empty category");
    return std::nullopt;
  }
  return AsymmetricAbxFromDistances(DistanceTable(a.tokens, x.tokens, distance),
                                    DistanceTable(b.tokens, x.tokens, distance), false);
}

std::optional<double> SymmetrizedCell(const AbxCategory& a, const AbxCategory& b,
                                      const SequenceDistance& distance) {
  auto ab = AsymmetricAbx(a, b, distance);
  auto ba = AsymmetricAbx(b, a, distance);
  if (!ab || !ba) return std::nullopt;
  return (*ab + *ba) / 2.0;
}

std::optional<double> SymmetrizedCell(const AbxCategory& a, const AbxCategory& b,
                                      FrameMetric metric) {
  return SymmetrizedCell(a, b, DtwWith(metric));
}

// ---------------------------------------------------------------------------
// Token extraction

namespace {

// A tiny slack absorbs decimal times such as 0.29 * 100 = 28.999999999999996.
std::size_t FrameIndex(double seconds, double rate) {
  return static_cast<std::size_t>(std::floor(seconds * rate + 1e-6));
}

std::optional<Matrix> Slice(const TriphoneToken& item, const Matrix& frames, double rate) {
  const std::size_t begin = FrameIndex(item.onset, rate);
  const std::size_t end = std::min(FrameIndex(item.offset, rate), frames.rows());
  if (end <= begin) return std::nullopt;
  return frames.RowRange(begin, end);
}

void DropToken(const TriphoneToken& item, std::int64_t* dropped) {
  Warn("dropping token " + item.file_id + " [" + std::to_string(item.onset) + ", " +
       std::to_string(item.offset) + "]: no frames in span");
  if (dropped) ++*dropped;
}

}  // namespace

std::vector<AbxToken> ExtractTokens(const std::vector<TriphoneToken>& items,
                                    const FeatureArchive& archive, std::int64_t* dropped) {
  std::vector<AbxToken> tokens;
  tokens.reserve(items.size());
  for (const auto& item : items) {
    if (!archive.Contains(item.file_id)) {
      throw Error(ErrorKind::kNotFound, "token " + item.file_id + " " +
                                            std::to_string(item.onset) + " " +
                                            std::to_string(item.offset) +
                                            ": utterance missing from feature archive");
    }
    const auto& seq = archive.Get(item.file_id);
    auto frames = Slice(item, seq.frames, seq.frame_rate);
    if (!frames) {
      DropToken(item, dropped);
      continue;
    }
    tokens.push_back(AbxToken{item, std::move(*frames)});
  }
  return tokens;
}

std::vector<AbxToken> ExtractTokensFromUnits(const std::vector<TriphoneToken>& items,
                                             const std::vector<UnitSequence>& units,
                                             std::int32_t codebook_size, double frame_rate,
                                             std::int64_t* dropped) {
  std::map<std::string, const UnitSequence*> by_id;
  for (const auto& u : units) by_id[u.utt_id] = &u;
  std::map<std::string, FeatureSequence> encoded;
  std::vector<AbxToken> tokens;
  for (const auto& item : items) {
    auto it = by_id.find(item.file_id);
    if (it == by_id.end()) {
      throw Error(ErrorKind::kNotFound, "token " + item.file_id + " " +
                                            std::to_string(item.onset) +
                                            ": utterance missing from unit sequences");
    }
    auto enc = encoded.find(item.file_id);
    if (enc == encoded.end()) {
      enc = encoded.emplace(item.file_id, OneHotEncode(*it->second, codebook_size, frame_rate))
                .first;
    }
    auto frames = Slice(item, enc->second.frames, frame_rate);
    if (!frames) {
      DropToken(item, dropped);
      continue;
    }
    tokens.push_back(AbxToken{item, std::move(*frames)});
  }
  return tokens;
}

// ---------------------------------------------------------------------------
// Full evaluation

namespace {

using Context = std::pair<std::string, std::string>;    // (left, right)
using PhonePair = std::pair<std::string, std::string>;  // sorted centers

struct CellScore {
  PhonePair pair;
  double score;
};

struct ContextOutcome {
  std::vector<CellScore> cells;
  std::int64_t skipped = 0;
};

// Distances between tokens of one context, computed on first use.
class DistanceCache {
 public:
  DistanceCache(const std::vector<const AbxToken*>& tokens, FrameMetric metric)
      : tokens_(tokens),
        metric_(metric),
        table_(tokens.size(), tokens.size(), std::numeric_limits<double>::quiet_NaN()) {}

  double operator()(std::size_t from, std::size_t to) {
    double& slot = table_(from, to);
    if (std::isnan(slot)) slot = DtwDistance(tokens_[from]->frames, tokens_[to]->frames, metric_);
    return slot;
  }

  Matrix Table(const std::vector<std::size_t>& from, const std::vector<std::size_t>& to) {
    Matrix out(from.size(), to.size());
    for (std::size_t i = 0; i < from.size(); ++i)
      for (std::size_t k = 0; k < to.size(); ++k) out(i, k) = (*this)(from[i], to[k]);
    return out;
  }

 private:
  const std::vector<const AbxToken*>& tokens_;
  FrameMetric metric_;
  Matrix table_;
};

ContextOutcome EvaluateContext(const std::vector<const AbxToken*>& tokens, AbxMode mode,
                               FrameMetric metric) {
  // (center, speaker) -> local token indices.
  std::map<std::string, std::map<std::string, std::vector<std::size_t>>> by_center;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    by_center[tokens[i]->item.center][tokens[i]->item.speaker].push_back(i);
  }
  DistanceCache cache(tokens, metric);
  ContextOutcome out;
  auto direction = [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
                       const std::vector<std::size_t>* x) -> std::optional<double> {
    if (x == nullptr) {
      if (a.size() < 2 || b.empty()) return std::nullopt;
      return AsymmetricAbxFromDistances(cache.Table(a, a), cache.Table(b, a), true);
    }
    if (a.empty() || b.empty() || x->empty()) return std::nullopt;
    return AsymmetricAbxFromDistances(cache.Table(a, *x), cache.Table(b, *x), false);
  };

  for (auto c1 = by_center.begin(); c1 != by_center.end(); ++c1) {
    for (auto c2 = std::next(c1); c2 != by_center.end(); ++c2) {
      const PhonePair pair{c1->first, c2->first};
      for (const auto& [speaker, a] : c1->second) {
        auto b_it = c2->second.find(speaker);
        if (b_it == c2->second.end()) continue;
        const auto& b = b_it->second;
        if (mode == AbxMode::kWithin) {
          auto ab = direction(a, b, nullptr);
          auto ba = direction(b, a, nullptr);
          if (ab && ba) {
            out.cells.push_back({pair, (*ab + *ba) / 2.0});
          } else {
            ++out.skipped;
          }
          continue;
        }
        std::set<std::string> x_speakers;
        for (const auto& [s, idx] : c1->second) x_speakers.insert(s);
        for (const auto& [s, idx] : c2->second) x_speakers.insert(s);
        x_speakers.erase(speaker);
        for (const auto& sx : x_speakers) {
          auto xa = c1->second.find(sx);
          auto xb = c2->second.find(sx);
          if (xa == c1->second.end() || xb == c2->second.end()) {
            ++out.skipped;
            continue;
          }
          auto ab = direction(a, b, &xa->second);
          auto ba = direction(b, a, &xb->second);
          if (ab && ba) {
            out.cells.push_back({pair, (*ab + *ba) / 2.0});
          } else {
            ++out.skipped;
          }
        }
      }
    }
  }
  return out;
}

double Mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

AbxResult AbxEvaluate(const std::vector<AbxToken>& tokens, AbxMode mode, FrameMetric metric,
                      std::size_t threads) {
  std::map<Context, std::vector<const AbxToken*>> contexts;
  for (const auto& t : tokens) contexts[{t.item.left, t.item.right}].push_back(&t);

  std::vector<const std::vector<const AbxToken*>*> work;
  std::vector<Context> keys;
  for (const auto& [ctx, members] : contexts) {
    keys.push_back(ctx);
    work.push_back(&members);
  }
  std::vector<ContextOutcome> outcomes(work.size());
  ParallelFor(work.size(), ResolveThreads(threads),
              [&](std::size_t i) { outcomes[i] = EvaluateContext(*work[i], mode, metric); });

  // phone pair -> context -> cell scores, all in sorted key order.
  std::map<PhonePair, std::map<Context, std::vector<double>>> grouped;
  AbxResult result;
  result.mode = mode;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    result.skipped_cells += outcomes[i].skipped;
    for (const auto& cell : outcomes[i].cells) {
      grouped[cell.pair][keys[i]].push_back(cell.score);
      ++result.cell_count;
    }
  }
  if (result.skipped_cells > 0) {
    Warn(std::to_string(result.skipped_cells) +
         " ABX cells skipped (a category with too few tokens for one direction)");
  }
  if (grouped.empty()) {
    throw Error(ErrorKind::kNoCells, std::string("no valid ABX cells in ") +
                                         std::string(AbxModeName(mode)) + " mode");
  }
  std::vector<double> pair_scores;
  for (const auto& [pair, by_context] : grouped) {
    std::vector<double> context_scores;
    for (const auto& [ctx, cells] : by_context) context_scores.push_back(Mean(cells));
    const double score = Mean(context_scores);
    result.per_phone_pair[pair.first + ":" + pair.second] = 100.0 * score;
    pair_scores.push_back(score);
  }
  result.error_rate = 100.0 * Mean(pair_scores);
  return result;
}

AbxResult AbxEvaluate(const std::vector<TriphoneToken>& items, const FeatureArchive& archive,
                      AbxMode mode, FrameMetric metric, std::size_t threads) {
  std::int64_t dropped = 0;
  auto tokens = ExtractTokens(items, archive, &dropped);
  auto result = AbxEvaluate(tokens, mode, metric, threads);
  result.dropped_tokens = dropped;
  return result;
}

FeatureSequence OneHotEncode(const UnitSequence& seq, std::int32_t codebook_size,
                             double frame_rate) {
  if (codebook_size <= 0) {
    throw Error(ErrorKind::kValidation, "codebook size must be positive");
  }
  FeatureSequence out;
  out.utt_id = seq.utt_id;
  out.frame_rate = frame_rate;
  out.frames = Matrix(seq.units.size(), static_cast<std::size_t>(codebook_size));
  for (std::size_t t = 0; t < seq.units.size(); ++t) {
    const auto u = seq.units[t];
    if (u < 0 || u >= codebook_size) {
      throw Error(ErrorKind::kValidation, seq.utt_id + ": unit " + std::to_string(u) +
                                              " outside codebook of size " +
                                              std::to_string(codebook_size));
    }
    out.frames(t, static_cast<std::size_t>(u)) = 1.0;
  }
  return out;
}

MetricReport AbxReport(const AbxResult& result, FrameMetric metric) {
  MetricReport r;
  r.metric = "abx";
  r.aggregate = result.error_rate;
  r.subsets = result.per_phone_pair;
  r.counts["cells"] = result.cell_count;
  r.counts["skipped_cells"] = result.skipped_cells;
  r.counts["dropped_tokens"] = result.dropped_tokens;
  r.counts["phone_pairs"] = static_cast<std::int64_t>(result.per_phone_pair.size());
  r.config["mode"] = std::string(AbxModeName(result.mode));
  r.config["distance"] = std::string(FrameMetricName(metric));
  return r;
}

}  // namespace zrc
