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

#include "zrc/scoring.hpp"

#include <cmath>

#include "json.hpp"

namespace zrc {

PseudoProbability ChainRuleLogProb(const CausalScorer& model, const UnitSequence& seq) {
  std::span<const std::int32_t> units(seq.units);
  double total = 0.0;
  for (std::size_t i = 0; i < units.size(); ++i) {
    total += model.LogProb(units.first(i), units[i]);
  }
  if (auto end = model.LogProbEnd(units)) total += *end;
  return {total};
}

// ---------------------------------------------------------------------------
// NgramModel

NgramModel NgramModel::Train(const std::vector<UnitSequence>& corpus, std::int32_t order,
                             double alpha) {
  if (corpus.empty()) throw Error(ErrorKind::kValidation, "n-gram training corpus is empty");
  if (order < 1) throw Error(ErrorKind::kValidation, "n-gram order must be at least 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::kValidation, "n-gram smoothing alpha must be positive");
  }
  NgramModel m;
  m.order_ = order;
  m.alpha_ = alpha;
  const std::size_t h = static_cast<std::size_t>(order - 1);
  std::vector<std::int32_t> padded;
  for (const auto& seq : corpus) {
    for (auto u : seq.units) {
      if (u < 0) throw Error(ErrorKind::kValidation, seq.utt_id + ": negative unit");
      m.vocabulary_.insert(u);
    }
    padded.assign(h, kStart);
    padded.insert(padded.end(), seq.units.begin(), seq.units.end());
    padded.push_back(kEnd);
    for (std::size_t i = h; i < padded.size(); ++i) {
      std::vector<std::int32_t> ctx(padded.begin() + static_cast<std::ptrdiff_t>(i - h),
                                    padded.begin() + static_cast<std::ptrdiff_t>(i));
      m.counts_[ctx][padded[i]] += 1;
      m.context_totals_[ctx] += 1;
    }
  }
  return m;
}

void NgramModel::CheckToken(std::int32_t token) const {
  if (token != kEnd && !vocabulary_.count(token)) {
    throw Error(ErrorKind::kValidation,
                "unit " + std::to_string(token) + " is outside the n-gram vocabulary");
  }
}

std::vector<std::int32_t> NgramModel::Context(std::span<const std::int32_t> history) const {
  const std::size_t h = static_cast<std::size_t>(order_ - 1);
  std::vector<std::int32_t> ctx(h, kStart);
  const std::size_t take = std::min(h, history.size());
  std::copy(history.end() - static_cast<std::ptrdiff_t>(take), history.end(),
            ctx.end() - static_cast<std::ptrdiff_t>(take));
  return ctx;
}

double NgramModel::Prob(std::span<const std::int32_t> context, std::int32_t next) const {
  CheckToken(next);
  std::vector<std::int32_t> ctx(context.begin(), context.end());
  std::uint64_t joint = 0;
  std::uint64_t total = 0;
  if (auto it = counts_.find(ctx); it != counts_.end()) {
    if (auto c = it->second.find(next); c != it->second.end()) joint = c->second;
    total = context_totals_.at(ctx);
  }
  return (static_cast<double>(joint) + alpha_) /
         (static_cast<double>(total) + alpha_ * static_cast<double>(outcome_count()));
}

double NgramModel::LogProb(std::span<const std::int32_t> history, std::int32_t next) const {
  for (auto u : history) CheckToken(u);
  return std::log(Prob(Context(history), next));
}

std::optional<double> NgramModel::LogProbEnd(std::span<const std::int32_t> sequence) const {
  return std::log(Prob(Context(sequence), kEnd));
}

std::vector<std::vector<std::int32_t>> NgramModel::ObservedContexts() const {
  std::vector<std::vector<std::int32_t>> out;
  for (const auto& [ctx, total] : context_totals_) out.push_back(ctx);
  return out;
}

namespace {

std::string TokenName(std::int32_t t) {
  if (t == NgramModel::kStart) return "<s>";
  if (t == NgramModel::kEnd) return "</s>";
  return std::to_string(t);
}

std::int32_t TokenFromName(std::string_view s) {
  if (s == "<s>") return NgramModel::kStart;
  if (s == "</s>") return NgramModel::kEnd;
  auto v = ParseInt(s, "n-gram token");
  if (v < 0 || v > INT32_MAX) throw Error(ErrorKind::kValidation, "bad n-gram token");
  return static_cast<std::int32_t>(v);
}

}  // namespace

std::string NgramModel::ToJson() const {
  nlohmann::json j;
  j["order"] = order_;
  j["alpha"] = alpha_;
  j["vocabulary"] = std::vector<std::int32_t>(vocabulary_.begin(), vocabulary_.end());
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [ctx, outcomes] : counts_) {
    std::string key;
    for (std::size_t i = 0; i < ctx.size(); ++i) key += (i ? " " : "") + TokenName(ctx[i]);
    nlohmann::json row = nlohmann::json::object();
    for (const auto& [u, c] : outcomes) row[TokenName(u)] = c;
    counts[key] = row;
  }
  j["counts"] = counts;
  return j.dump(1) + "\n";
}

NgramModel NgramModel::FromJson(const std::string& text) {
  NgramModel m;
  try {
    auto j = nlohmann::json::parse(text);
    m.order_ = j.at("order").get<std::int32_t>();
    m.alpha_ = j.at("alpha").get<double>();
    for (auto u : j.at("vocabulary").get<std::vector<std::int32_t>>()) m.vocabulary_.insert(u);
    for (auto& [key, row] : j.at("counts").items()) {
      std::vector<std::int32_t> ctx;
      for (auto tok : SplitWhitespace(key)) ctx.push_back(TokenFromName(tok));
      if (ctx.size() != static_cast<std::size_t>(m.order_ - 1)) {
        throw Error(ErrorKind::kFormat, "n-gram context '" + key + "' has the wrong length");
      }
      for (auto& [u, c] : row.items()) {
        const auto count = c.get<std::uint64_t>();
        m.counts_[ctx][TokenFromName(u)] = count;
        m.context_totals_[ctx] += count;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("malformed n-gram model: ") + e.what());
  }
  if (m.order_ < 1 || !(m.alpha_ > 0.0)) {
    throw Error(ErrorKind::kValidation, "n-gram model needs order >= 1 and alpha > 0");
  }
  return m;
}

void NgramModel::Save(const std::filesystem::path& path) const { WriteTextFile(path, ToJson()); }

NgramModel NgramModel::Load(const std::filesystem::path& path) {
  return FromJson(ReadTextFile(path));
}

// ---------------------------------------------------------------------------
// Span scoring

std::vector<std::pair<std::size_t, std::size_t>> SpanWindows(std::size_t length,
                                                              const SpanConfig& config) {
  if (config.span < 1 || config.stride < 1) {
    throw Error(ErrorKind::kValidation, "span and stride must both be at least 1");
  }
  if (length == 0) throw Error(ErrorKind::kValidation, "cannot score an empty sequence");
  const auto span = static_cast<std::size_t>(config.span);
  const auto stride = static_cast<std::size_t>(config.stride);
  std::vector<std::pair<std::size_t, std::size_t>> windows;
  for (std::size_t j = 0; j <= (length - 1) / stride; ++j) {
    const std::size_t first = 1 + j * stride;
    windows.emplace_back(first, std::min(first + span, length));
  }
  return windows;
}

PseudoProbability SpanPseudoProb(const MaskedWindowScorer& scorer, const UnitSequence& seq,
                                 const SpanConfig& config, bool per_token) {
  double total = 0.0;
  for (const auto& [first, last] : SpanWindows(seq.units.size(), config)) {
    total += scorer.WindowLogProb(seq, first, last);
  }
  if (per_token) total /= static_cast<double>(seq.units.size());
  return {total};
}

JointTableScorer::JointTableScorer(std::vector<std::int32_t> vocabulary,
                                   std::map<std::vector<std::int32_t>, double> joint)
    : vocabulary_(std::move(vocabulary)), joint_(std::move(joint)) {
  if (vocabulary_.empty()) throw Error(ErrorKind::kValidation, "empty vocabulary");
  for (const auto& [seq, p] : joint_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(ErrorKind::kValidation, "joint table probabilities must be non-negative");
    }
  }
}

double JointTableScorer::WindowLogProb(const UnitSequence& seq, std::size_t first,
                                       std::size_t last) const {
  if (first < 1 || last < first || last > seq.units.size()) {
    throw Error(ErrorKind::kValidation, "window out of range");
  }
  auto mass = [&](const std::vector<std::int32_t>& s) {
    auto it = joint_.find(s);
    return it == joint_.end() ? 0.0 : it->second;
  };
  const double numerator = mass(seq.units);
  // Enumerate every filling of the window, odometer style.
  std::vector<std::int32_t> probe = seq.units;
  const std::size_t width = last - first + 1;
  std::vector<std::size_t> digit(width, 0);
  double denominator = 0.0;
  for (;;) {
    for (std::size_t w = 0; w < width; ++w) probe[first - 1 + w] = vocabulary_[digit[w]];
    denominator += mass(probe);
    std::size_t w = 0;
    while (w < width && ++digit[w] == vocabulary_.size()) digit[w++] = 0;
    if (w == width) break;
  }
  if (!(denominator > 0.0)) {
    throw Error(ErrorKind::kDomain, seq.utt_id + ": conditioning context has zero mass");
  }
  return std::log(numerator / denominator);
}

ExternalWindowScorer ExternalWindowScorer::Load(const std::filesystem::path& path) {
  ExternalWindowScorer s;
  const std::string text = ReadTextFile(path);
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + start, end - start);
    start = end + 1;
    ++line_no;
    auto cols = SplitChar(line, '\t');
    if (cols.size() == 1 && SplitWhitespace(cols[0]).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (line_no == 1 && cols.size() == 4 && cols[0] == "utt_id") continue;
    if (cols.size() != 4) throw Error(ErrorKind::kParse, where + ": expected utt_id, i, j, log_p");
    const auto first = ParseInt(cols[1], where);
    const auto last = ParseInt(cols[2], where);
    if (first < 1 || last < first) throw Error(ErrorKind::kValidation, where + ": bad window");
    s.Set(std::string(cols[0]), static_cast<std::size_t>(first), static_cast<std::size_t>(last),
          ParseDouble(cols[3], where));
  }
  return s;
}

void ExternalWindowScorer::Set(const std::string& utt_id, std::size_t first, std::size_t last,
                               double log_p) {
  table_[{utt_id, first, last}] = log_p;
}

double ExternalWindowScorer::WindowLogProb(const UnitSequence& seq, std::size_t first,
                                           std::size_t last) const {
  auto it = table_.find({seq.utt_id, first, last});
  if (it == table_.end()) {
    throw Error(ErrorKind::kNotFound, "no external score for window (" + seq.utt_id + ", " +
                                          std::to_string(first) + ", " + std::to_string(last) +
                                          ")");
  }
  return it->second;
}

}  // namespace zrc
