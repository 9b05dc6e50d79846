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

#include "zrc/sampler.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "zrc/io_formats.hpp"

namespace zrc {

namespace {

int Credit(double anchor, double other) {
  if (anchor > other) return 2;
  if (anchor == other) return 1;
  return 0;
}

void CheckScores(const std::vector<double>& scores, std::size_t m, const std::string& who) {
  if (scores.size() != m) {
    throw Error(ErrorKind::kValidation, who + ": expected " + std::to_string(m) + " scores, got " +
                                            std::to_string(scores.size()));
  }
  for (double v : scores) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kNonFinite, who + ": non-finite score");
  }
}

}  // namespace

void CandidateSet::Validate() const {
  if (score_count < 1) throw Error(ErrorKind::kValidation, "candidate set needs M >= 1 scores");
  for (const auto& a : anchors) {
    CheckScores(a.scores, score_count, "anchor " + a.id);
    if (a.candidates.empty()) {
      throw Error(ErrorKind::kValidation, "anchor " + a.id + " has no candidates");
    }
    for (const auto& c : a.candidates) CheckScores(c.scores, score_count, "candidate " + c.id);
  }
}

void BalanceTally::Add(std::span<const double> anchor, std::span<const double> other) {
  for (std::size_t m = 0; m < credit_.size(); ++m) credit_[m] += Credit(anchor[m], other[m]);
  ++pairs_;
}

double BalanceTally::ObjectiveWith(std::span<const double> anchor,
                                   std::span<const double> other) const {
  const auto n = static_cast<std::int64_t>(pairs_ + 1);
  std::int64_t dev = 0;
  for (std::size_t m = 0; m < credit_.size(); ++m) {
    dev += std::abs(credit_[m] + Credit(anchor[m], other[m]) - n);
  }
  return static_cast<double>(dev) / (2.0 * static_cast<double>(n));
}

double BalanceTally::Objective() const {
  if (pairs_ == 0) return 0.5 * static_cast<double>(credit_.size());
  const auto n = static_cast<std::int64_t>(pairs_);
  std::int64_t dev = 0;
  for (auto c : credit_) dev += std::abs(c - n);
  return static_cast<double>(dev) / (2.0 * static_cast<double>(n));
}

double BalanceTally::Accuracy(std::size_t m) const {
  if (pairs_ == 0) return 0.5;
  return static_cast<double>(credit_[m]) / (2.0 * static_cast<double>(pairs_));
}

double BalanceObjective(const std::vector<std::int64_t>& chosen, const CandidateSet& set) {
  if (chosen.size() != set.anchors.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "assignment size differs from anchor count");
  }
  BalanceTally tally(set.score_count);
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    if (chosen[i] < 0) continue;
    const auto& a = set.anchors[i];
    if (static_cast<std::size_t>(chosen[i]) >= a.candidates.size()) {
      throw Error(ErrorKind::kValidation, "anchor " + a.id + ": candidate index out of range");
    }
    tally.Add(a.scores, a.candidates[static_cast<std::size_t>(chosen[i])].scores);
  }
  return tally.Objective();
}

double BalanceObjective(const Assignment& assignment, const CandidateSet& set) {
  return BalanceObjective(assignment.chosen, set);
}

namespace {

std::map<std::string, std::vector<std::size_t>> Strata(const CandidateSet& set, bool stratify) {
  std::map<std::string, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < set.anchors.size(); ++i) {
    strata[stratify ? set.anchors[i].stratum : std::string()].push_back(i);
  }
  return strata;
}

Assignment WordPass(const CandidateSet& set,
                    const std::map<std::string, std::vector<std::size_t>>& strata,
                    std::uint64_t seed, std::size_t restart) {
  Rng rng(seed ^ static_cast<std::uint64_t>(restart));
  Assignment out;
  out.chosen.assign(set.anchors.size(), -1);
  out.seed = seed;
  out.restart = restart;
  std::vector<std::size_t> candidates;
  for (const auto& [name, members] : strata) {
    std::vector<std::size_t> order = members;
    rng.Shuffle(order);
    BalanceTally tally(set.score_count);
    for (std::size_t idx : order) {
      const Anchor& anchor = set.anchors[idx];
      candidates.resize(anchor.candidates.size());
      for (std::size_t k = 0; k < candidates.size(); ++k) candidates[k] = k;
      rng.Shuffle(candidates);
      const double current = tally.Objective();
      std::size_t pick = candidates.size();
      for (std::size_t k : candidates) {
        if (tally.ObjectiveWith(anchor.scores, anchor.candidates[k].scores) <= current) {
          pick = k;
          break;
        }
      }
      if (pick == candidates.size()) pick = rng.Below(candidates.size());
      tally.Add(anchor.scores, anchor.candidates[pick].scores);
      out.chosen[idx] = static_cast<std::int64_t>(pick);
    }
    out.stratum_objective += tally.Objective();
  }
  out.objective = BalanceObjective(out.chosen, set);
  return out;
}

template <class Result>
const Result& BestOf(const std::vector<Result>& runs) {
  const Result* best = &runs.front();
  for (const auto& r : runs) {
    if (r.stratum_objective < best->stratum_objective) best = &r;
  }
  return *best;
}

}  // namespace

Assignment SampleWordPairs(const CandidateSet& set, const SamplerOptions& options) {
  set.Validate();
  const auto strata = Strata(set, options.stratify);
  const std::size_t restarts = std::max<std::size_t>(1, options.restarts);
  std::vector<Assignment> runs(restarts);
  ParallelFor(restarts, ResolveThreads(options.threads),
              [&](std::size_t r) { runs[r] = WordPass(set, strata, options.seed, r); });
  return BestOf(runs);
}

// ---------------------------------------------------------------------------
// Sentence pairs

double SentenceObjective(const std::vector<SentencePair>& pool,
                         const std::vector<std::size_t>& chosen) {
  if (pool.empty()) throw Error(ErrorKind::kValidation, "empty sentence pool");
  BalanceTally tally(pool.front().accepted_scores.size());
  for (auto i : chosen) tally.Add(pool.at(i).accepted_scores, pool.at(i).rejected_scores);
  return tally.Objective();
}

namespace {

// Largest-remainder split of `target` across groups proportional to size.
std::vector<std::size_t> SplitTarget(const std::vector<std::size_t>& sizes, std::size_t target,
                                     std::size_t total) {
  std::vector<std::size_t> quota(sizes.size());
  std::vector<std::pair<std::size_t, std::size_t>> remainders;  // (remainder numerator, index)
  std::size_t assigned = 0;
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    quota[g] = sizes[g] * target / total;
    assigned += quota[g];
    remainders.emplace_back(sizes[g] * target % total, g);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < target; ++i) {
    ++quota[remainders[i].second];
    ++assigned;
  }
  return quota;
}

SentenceSelection SentencePass(const std::vector<SentencePair>& pool,
                               const std::vector<std::vector<std::size_t>>& groups,
                               const std::vector<std::size_t>& quotas, std::uint64_t seed,
                               std::size_t restart) {
  Rng rng(seed ^ static_cast<std::uint64_t>(restart));
  SentenceSelection out;
  out.seed = seed;
  out.restart = restart;
  const std::size_t m = pool.front().accepted_scores.size();
  std::vector<std::size_t> order;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::vector<std::size_t> unchosen = groups[g];
    BalanceTally tally(m);
    for (std::size_t step = 0; step < quotas[g]; ++step) {
      order.resize(unchosen.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      rng.Shuffle(order);
      const double current = tally.Objective();
      std::size_t pick = order.size();
      for (std::size_t pos : order) {
        const auto& p = pool[unchosen[pos]];
        if (tally.ObjectiveWith(p.accepted_scores, p.rejected_scores) <= current) {
          pick = pos;
          break;
        }
      }
      if (pick == order.size()) pick = rng.Below(unchosen.size());
      const std::size_t idx = unchosen[pick];
      tally.Add(pool[idx].accepted_scores, pool[idx].rejected_scores);
      out.chosen.push_back(idx);
      unchosen.erase(unchosen.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    out.stratum_objective += tally.Objective();
  }
  out.objective = SentenceObjective(pool, out.chosen);
  return out;
}

}  // namespace

SentenceSelection SampleSentencePairs(const std::vector<SentencePair>& pool, std::size_t target,
                                      const SamplerOptions& options) {
  if (pool.empty()) throw Error(ErrorKind::kValidation, "empty sentence pool");
  if (target > pool.size()) {
    throw Error(ErrorKind::kValidation, "target " + std::to_string(target) +
                                            " exceeds pool size " + std::to_string(pool.size()));
  }
  const std::size_t m = pool.front().accepted_scores.size();
  if (m < 1) throw Error(ErrorKind::kValidation, "sentence pairs need M >= 1 scores");
  std::set<std::string> ids;
  for (const auto& p : pool) {
    CheckScores(p.accepted_scores, m, "pair " + p.id);
    CheckScores(p.rejected_scores, m, "pair " + p.id);
    if (!ids.insert(p.id).second) {
      throw Error(ErrorKind::kValidation, "duplicate sentence pair id '" + p.id + "'");
    }
  }
  std::map<std::string, std::vector<std::size_t>> by_paradigm;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    by_paradigm[options.stratify ? pool[i].paradigm : std::string()].push_back(i);
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> sizes;
  for (auto& [name, members] : by_paradigm) {
    sizes.push_back(members.size());
    groups.push_back(std::move(members));
  }
  const auto quotas = SplitTarget(sizes, target, pool.size());

  const std::size_t restarts = std::max<std::size_t>(1, options.restarts);
  std::vector<SentenceSelection> runs(restarts);
  ParallelFor(restarts, ResolveThreads(options.threads), [&](std::size_t r) {
    runs[r] = SentencePass(pool, groups, quotas, options.seed, r);
  });
  return BestOf(runs);
}

// ---------------------------------------------------------------------------
// Files

namespace {

std::string Shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<std::string> TsvLines(const std::filesystem::path& path) {
  std::vector<std::string> lines;
  const std::string text = ReadTextFile(path);
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    lines.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

}  // namespace

CandidateSet ReadCandidateSet(const std::filesystem::path& path) {
  const auto lines = TsvLines(path);
  if (lines.empty()) throw Error(ErrorKind::kFormat, path.string() + ":1: missing header");
  const auto header = SplitChar(lines[0], '\t');
  if (header.size() < 4 || header[0] != "anchor_id" || header[1] != "stratum" ||
      header[2] != "candidate_id") {
    throw Error(ErrorKind::kFormat, path.string() +
                                        ":1: header must be anchor_id, stratum, candidate_id, "
                                        "s_1..s_M");
  }
  CandidateSet set;
  set.score_count = header.size() - 3;
  std::map<std::string, std::size_t> index;
  std::vector<bool> has_self;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (SplitWhitespace(lines[n]).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(n + 1);
    const auto cols = SplitChar(lines[n], '\t');
    if (cols.size() != header.size()) {
      throw Error(ErrorKind::kParse, where + ": expected " + std::to_string(header.size()) +
                                         " columns, found " + std::to_string(cols.size()));
    }
    std::vector<double> scores;
    for (std::size_t c = 3; c < cols.size(); ++c) scores.push_back(ParseDouble(cols[c], where));
    const std::string id(cols[0]);
    auto [it, inserted] = index.emplace(id, set.anchors.size());
    if (inserted) {
      set.anchors.push_back(Anchor{id, std::string(cols[1]), {}, {}});
      has_self.push_back(false);
    }
    Anchor& anchor = set.anchors[it->second];
    if (anchor.stratum != cols[1]) {
      throw Error(ErrorKind::kValidation, where + ": anchor " + id + " changes stratum");
    }
    if (cols[2] == "@self") {
      if (has_self[it->second]) {
        throw Error(ErrorKind::kValidation, where + ": anchor " + id + " listed twice");
      }
      has_self[it->second] = true;
      anchor.scores = std::move(scores);
    } else {
      anchor.candidates.push_back(Candidate{std::string(cols[2]), std::move(scores)});
    }
  }
  for (std::size_t i = 0; i < set.anchors.size(); ++i) {
    if (!has_self[i]) {
      throw Error(ErrorKind::kValidation, "anchor " + set.anchors[i].id + " has no @self row");
    }
  }
  set.Validate();
  return set;
}

void WriteCandidateSet(const CandidateSet& set, const std::filesystem::path& path) {
  std::string out = "anchor_id\tstratum\tcandidate_id";
  for (std::size_t m = 1; m <= set.score_count; ++m) out += "\ts_" + std::to_string(m);
  out.push_back('\n');
  auto row = [&](const Anchor& a, const std::string& cid, const std::vector<double>& s) {
    out += a.id + "\t" + a.stratum + "\t" + cid;
    for (double v : s) out += "\t" + Shortest(v);
    out.push_back('\n');
  };
  for (const auto& a : set.anchors) {
    row(a, "@self", a.scores);
    for (const auto& c : a.candidates) row(a, c.id, c.scores);
  }
  WriteTextFile(path, out);
}

void WriteAssignment(const Assignment& assignment, const CandidateSet& set,
                     const std::filesystem::path& path) {
  std::string out = "anchor_id\tstratum\tcandidate_id\n";
  for (std::size_t i = 0; i < set.anchors.size(); ++i) {
    const auto& a = set.anchors[i];
    const auto c = assignment.chosen.at(i);
    out += a.id + "\t" + a.stratum + "\t" +
           (c < 0 ? std::string("-") : a.candidates.at(static_cast<std::size_t>(c)).id) + "\n";
  }
  WriteTextFile(path, out);
}

std::vector<SentencePair> ReadSentencePool(const std::filesystem::path& path) {
  const auto lines = TsvLines(path);
  if (lines.empty()) throw Error(ErrorKind::kFormat, path.string() + ":1: missing header");
  const auto header = SplitChar(lines[0], '\t');
  if (header.size() < 4 || header[0] != "pair_id" || header[1] != "paradigm" ||
      (header.size() - 2) % 2 != 0) {
    throw Error(ErrorKind::kFormat,
                path.string() + ":1: header must be pair_id, paradigm, acc_1..acc_M, rej_1..rej_M");
  }
  const std::size_t m = (header.size() - 2) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    if (!header[2 + i].starts_with("acc") || !header[2 + m + i].starts_with("rej")) {
      throw Error(ErrorKind::kFormat, path.string() + ":1: score columns must be acc_* then rej_*");
    }
  }
  std::vector<SentencePair> pool;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (SplitWhitespace(lines[n]).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(n + 1);
    const auto cols = SplitChar(lines[n], '\t');
    if (cols.size() != header.size()) {
      throw Error(ErrorKind::kParse, where + ": expected " + std::to_string(header.size()) +
                                         " columns, found " + std::to_string(cols.size()));
    }
    SentencePair p{std::string(cols[0]), std::string(cols[1]), {}, {}};
    for (std::size_t i = 0; i < m; ++i) {
      p.accepted_scores.push_back(ParseDouble(cols[2 + i], where));
      p.rejected_scores.push_back(ParseDouble(cols[2 + m + i], where));
    }
    pool.push_back(std::move(p));
  }
  return pool;
}

void WriteSentenceSelection(const SentenceSelection& selection,
                            const std::vector<SentencePair>& pool,
                            const std::filesystem::path& path) {
  std::vector<std::size_t> sorted = selection.chosen;
  std::sort(sorted.begin(), sorted.end());
  std::string out = "pair_id\tparadigm\n";
  for (auto i : sorted) out += pool.at(i).id + "\t" + pool.at(i).paradigm + "\n";
  WriteTextFile(path, out);
}

}  // namespace zrc
