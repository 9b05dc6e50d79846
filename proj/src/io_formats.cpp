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

#include "zrc/io_formats.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "binary_io.hpp"
#include "json.hpp"

namespace zrc {

namespace fs = std::filesystem;
using internal::GetLe;
using internal::PutLe;

namespace {

constexpr char kItemHeader[] = "#file onset offset #phone prev-phone next-phone speaker";
constexpr char kFeatureMagic[4] = {'Z', 'R', 'C', 'F'};
constexpr std::uint32_t kFeatureVersion = 1;

std::string Where(const fs::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

bool IsBlank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t'; });
}

// Shortest representation that reads back to the same double.
std::string ShortestDouble(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string EscapeTsv(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string UnescapeTsv(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      char n = s[++i];
      out.push_back(n == 't' ? '\t' : n == 'n' ? '\n' : n);
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

}  // namespace

std::string ReadTextFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kNotFound, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteTextFile(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Item files

std::vector<TriphoneToken> ReadItemFile(const fs::path& path) {
  const auto lines = Lines(ReadTextFile(path));
  if (lines.empty() || SplitWhitespace(lines[0]) != SplitWhitespace(kItemHeader)) {
    throw Error(ErrorKind::kFormat,
                Where(path, 1) + ": expected item header '" + kItemHeader + "'");
  }
  std::vector<TriphoneToken> items;
  std::set<std::tuple<std::string, double, double>> seen;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (IsBlank(lines[n])) continue;
    const std::string where = Where(path, n + 1);
    auto cols = SplitWhitespace(lines[n]);
    if (cols.size() != 7) {
      throw Error(ErrorKind::kParse, where + ": expected 7 columns, found " +
                                         std::to_string(cols.size()));
    }
    TriphoneToken t;
    t.file_id = cols[0];
    t.onset = ParseDouble(cols[1], where + " onset");
    t.offset = ParseDouble(cols[2], where + " offset");
    t.center = cols[3];
    t.left = cols[4];
    t.right = cols[5];
    t.speaker = cols[6];
    if (!std::isfinite(t.onset) || !std::isfinite(t.offset) || t.onset < 0.0) {
      throw Error(ErrorKind::kValidation, where + ": onset/offset must be finite, onset >= 0");
    }
    if (t.offset <= t.onset) {
      throw Error(ErrorKind::kValidation, where + ": offset must be greater than onset");
    }
    if (!seen.emplace(t.file_id, t.onset, t.offset).second) {
      throw Error(ErrorKind::kValidation, where + ": duplicate token " + t.file_id + " " +
                                              std::string(cols[1]) + " " + std::string(cols[2]));
    }
    items.push_back(std::move(t));
  }
  return items;
}

void WriteItemFile(const std::vector<TriphoneToken>& items, const fs::path& path) {
  std::string out = std::string(kItemHeader) + "\n";
  for (const auto& t : items) {
    out += t.file_id + " " + ShortestDouble(t.onset) + " " + ShortestDouble(t.offset) + " " +
           t.center + " " + t.left + " " + t.right + " " + t.speaker + "\n";
  }
  WriteTextFile(path, out);
}

// ---------------------------------------------------------------------------
// Features

void ValidateFeatures(const FeatureSequence& seq, bool probability_rows) {
  if (seq.frames.rows() == 0) {
    throw Error(ErrorKind::kValidation, seq.utt_id + ": feature sequence has no frames");
  }
  for (std::size_t t = 0; t < seq.frames.rows(); ++t) {
    double sum = 0.0;
    for (double v : seq.frames.row(t)) {
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::kNonFinite,
                    seq.utt_id + ": non-finite value in frame " + std::to_string(t));
      }
      if (probability_rows && v < 0.0) {
        throw Error(ErrorKind::kDomain,
                    seq.utt_id + ": negative probability in frame " + std::to_string(t));
      }
      sum += v;
    }
    if (probability_rows && std::abs(sum - 1.0) > 1e-6) {
      throw Error(ErrorKind::kDomain, seq.utt_id + ": frame " + std::to_string(t) +
                                          " does not sum to 1");
    }
  }
}

namespace {

FeatureSequence ParseFeatureBinary(const std::string& data, const fs::path& path,
                                   const std::string& utt_id) {
  const std::size_t header = 4 + 4 + 4 + 4 + 8;
  if (data.size() < 4 || std::memcmp(data.data(), kFeatureMagic, 4) != 0) {
    throw Error(ErrorKind::kMagicMismatch, path.string() + ": missing ZRCF magic");
  }
  if (data.size() < header) {
    throw Error(ErrorKind::kTruncated, path.string() + ": header truncated");
  }
  const auto version = GetLe<std::uint32_t>(data, 4);
  if (version != kFeatureVersion) {
    throw Error(ErrorKind::kFormat,
                path.string() + ": unsupported version " + std::to_string(version));
  }
  const auto dim = GetLe<std::uint32_t>(data, 8);
  const auto rate = GetLe<float>(data, 12);
  const auto frames = GetLe<std::uint64_t>(data, 16);
  if (dim == 0) throw Error(ErrorKind::kFormat, path.string() + ": dim must be positive");
  if (!(rate > 0.0f) || !std::isfinite(rate)) {
    throw Error(ErrorKind::kFormat, path.string() + ": rate must be positive");
  }
  const std::uint64_t count = frames * dim;
  if (frames != 0 && count / frames != dim) {
    throw Error(ErrorKind::kFormat, path.string() + ": frame count overflows");
  }
  const std::uint64_t body = data.size() - header;
  if (body < count * 4) {
    throw Error(ErrorKind::kTruncated, path.string() + ": body holds " +
                                           std::to_string(body / 4) + " floats, header announces " +
                                           std::to_string(count));
  }
  if (body > count * 4) {
    throw Error(ErrorKind::kDimensionMismatch,
                path.string() + ": trailing bytes after " + std::to_string(count) + " floats");
  }
  std::vector<double> values(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    values[i] = static_cast<double>(GetLe<float>(data, header + 4 * i));
  }
  FeatureSequence seq;
  seq.utt_id = utt_id;
  seq.frame_rate = static_cast<double>(rate);
  seq.frames = Matrix(frames, dim, std::move(values));
  ValidateFeatures(seq);
  return seq;
}

FeatureSequence ParseFeatureText(const std::string& data, const fs::path& path,
                                 const std::string& utt_id) {
  const auto lines = Lines(data);
  if (lines.empty()) throw Error(ErrorKind::kFormat, Where(path, 1) + ": empty feature file");
  auto head = SplitWhitespace(lines[0]);
  if (head.size() != 2 || !head[0].starts_with("dim=") || !head[1].starts_with("rate=")) {
    throw Error(ErrorKind::kFormat, Where(path, 1) + ": expected 'dim=<D> rate=<R>'");
  }
  const auto dim = ParseInt(head[0].substr(4), Where(path, 1) + " dim");
  const double rate = ParseDouble(head[1].substr(5), Where(path, 1) + " rate");
  if (dim <= 0) throw Error(ErrorKind::kFormat, Where(path, 1) + ": dim must be positive");
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorKind::kFormat, Where(path, 1) + ": rate must be positive");
  }
  FeatureSequence seq;
  seq.utt_id = utt_id;
  seq.frame_rate = rate;
  seq.frames = Matrix(0, static_cast<std::size_t>(dim));
  std::vector<double> row;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (IsBlank(lines[n])) continue;
    auto cols = SplitWhitespace(lines[n]);
    if (cols.size() != static_cast<std::size_t>(dim)) {
      throw Error(ErrorKind::kDimensionMismatch,
                  Where(path, n + 1) + ": row has " + std::to_string(cols.size()) +
                      " values, header says dim=" + std::to_string(dim));
    }
    row.clear();
    for (auto c : cols) {
      double v = ParseDouble(c, Where(path, n + 1));
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::kNonFinite, Where(path, n + 1) + ": non-finite value");
      }
      row.push_back(v);
    }
    seq.frames.AppendRow(row);
  }
  ValidateFeatures(seq);
  return seq;
}

}  // namespace

FeatureSequence ReadFeatureFile(const fs::path& path, const std::string& utt_id) {
  const std::string data = ReadTextFile(path);
  if (data.size() >= 4 && std::memcmp(data.data(), kFeatureMagic, 4) == 0) {
    return ParseFeatureBinary(data, path, utt_id);
  }
  if (data.starts_with("dim=")) return ParseFeatureText(data, path, utt_id);
  // Anything else must be a binary file with a bad magic.
  if (path.extension() == ".txt") return ParseFeatureText(data, path, utt_id);
  throw Error(ErrorKind::kMagicMismatch, path.string() + ": not a ZRCF feature file");
}

void WriteFeatureText(const FeatureSequence& seq, const fs::path& path) {
  std::string out = "dim=" + std::to_string(seq.dim()) + " rate=" +
                    ShortestDouble(seq.frame_rate) + "\n";
  for (std::size_t t = 0; t < seq.length(); ++t) {
    auto row = seq.frames.row(t);
    for (std::size_t d = 0; d < row.size(); ++d) {
      if (d) out.push_back(' ');
      out += ShortestDouble(row[d]);
    }
    out.push_back('\n');
  }
  WriteTextFile(path, out);
}

void WriteFeatureBinary(const FeatureSequence& seq, const fs::path& path) {
  std::string out(kFeatureMagic, 4);
  PutLe(out, kFeatureVersion);
  PutLe(out, static_cast<std::uint32_t>(seq.dim()));
  PutLe(out, static_cast<float>(seq.frame_rate));
  PutLe(out, static_cast<std::uint64_t>(seq.length()));
  for (double v : seq.frames.data()) PutLe(out, static_cast<float>(v));
  WriteTextFile(path, out);
}

FeatureArchive::FeatureArchive(fs::path dir) : dir_(std::move(dir)) {
  if (!fs::is_directory(dir_)) {
    throw Error(ErrorKind::kNotFound, "feature archive " + dir_.string() + " is not a directory");
  }
}

void FeatureArchive::Insert(FeatureSequence seq) {
  std::lock_guard lock(mutex_);
  auto id = seq.utt_id;
  cache_[id] = std::make_shared<const FeatureSequence>(std::move(seq));
}

FeatureSequence ReadFeatureArchive(const fs::path& dir, const std::string& utt_id) {
  for (const char* ext : {".zrcf", ".txt"}) {
    fs::path p = dir / (utt_id + ext);
    if (fs::exists(p)) return ReadFeatureFile(p, utt_id);
  }
  throw Error(ErrorKind::kNotFound,
              "utterance '" + utt_id + "' not found in feature archive " + dir.string());
}

const FeatureSequence& FeatureArchive::Get(const std::string& utt_id) const {
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(utt_id);
    if (it != cache_.end()) return *it->second;
  }
  if (dir_.empty()) {
    throw Error(ErrorKind::kNotFound, "utterance '" + utt_id + "' not in feature archive");
  }
  auto seq = std::make_shared<const FeatureSequence>(ReadFeatureArchive(dir_, utt_id));
  std::lock_guard lock(mutex_);
  auto [it, inserted] = cache_.emplace(utt_id, std::move(seq));
  return *it->second;
}

bool FeatureArchive::Contains(const std::string& utt_id) const {
  {
    std::lock_guard lock(mutex_);
    if (cache_.count(utt_id)) return true;
  }
  if (dir_.empty()) return false;
  return fs::exists(dir_ / (utt_id + ".zrcf")) || fs::exists(dir_ / (utt_id + ".txt"));
}

std::vector<std::string> FeatureArchive::Ids() const {
  std::set<std::string> ids;
  {
    std::lock_guard lock(mutex_);
    for (const auto& [id, seq] : cache_) ids.insert(id);
  }
  if (!dir_.empty()) {
    for (const auto& entry : fs::directory_iterator(dir_)) {
      if (!entry.is_regular_file()) continue;
      auto ext = entry.path().extension();
      if (ext == ".zrcf" || ext == ".txt") ids.insert(entry.path().stem().string());
    }
  }
  return {ids.begin(), ids.end()};
}

// ---------------------------------------------------------------------------
// Unit sequences

std::vector<UnitSequence> ReadUnitSequences(const fs::path& path) {
  const auto lines = Lines(ReadTextFile(path));
  std::vector<UnitSequence> seqs;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (IsBlank(lines[n])) continue;
    const std::string where = Where(path, n + 1);
    auto cols = SplitWhitespace(lines[n]);
    UnitSequence seq;
    seq.utt_id = cols[0];
    if (cols.size() < 2) {
      throw Error(ErrorKind::kValidation, where + ": utterance '" + seq.utt_id + "' has no units");
    }
    seq.units.reserve(cols.size() - 1);
    for (std::size_t i = 1; i < cols.size(); ++i) {
      auto u = ParseInt(cols[i], where);
      if (u < 0) throw Error(ErrorKind::kValidation, where + ": negative unit");
      if (u > INT32_MAX) throw Error(ErrorKind::kValidation, where + ": unit out of range");
      seq.units.push_back(static_cast<std::int32_t>(u));
    }
    seqs.push_back(std::move(seq));
  }
  return seqs;
}

void WriteUnitSequences(const std::vector<UnitSequence>& seqs, const fs::path& path) {
  std::string out;
  for (const auto& s : seqs) {
    if (s.units.empty()) {
      throw Error(ErrorKind::kValidation, "utterance '" + s.utt_id + "' has no units");
    }
    out += s.utt_id;
    for (auto u : s.units) {
      if (u < 0) throw Error(ErrorKind::kValidation, s.utt_id + ": negative unit");
      out.push_back(' ');
      out += std::to_string(u);
    }
    out.push_back('\n');
  }
  WriteTextFile(path, out);
}

// ---------------------------------------------------------------------------
// Pair manifests, similarity gold, external scores

std::vector<ScoredPair> ReadPairManifest(const fs::path& path) {
  const auto lines = Lines(ReadTextFile(path));
  if (lines.empty()) throw Error(ErrorKind::kFormat, Where(path, 1) + ": missing header");
  auto header = SplitChar(lines[0], '\t');
  if (header.size() < 3 || header[0] != "pair_id" || header[1] != "accepted_id" ||
      header[2] != "rejected_id") {
    throw Error(ErrorKind::kFormat,
                Where(path, 1) + ": header must start with pair_id, accepted_id, rejected_id");
  }
  std::vector<ScoredPair> pairs;
  std::set<std::string> ids;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (IsBlank(lines[n])) continue;
    const std::string where = Where(path, n + 1);
    auto cols = SplitChar(lines[n], '\t');
    if (cols.size() != header.size()) {
      throw Error(ErrorKind::kParse, where + ": expected " + std::to_string(header.size()) +
                                         " columns, found " + std::to_string(cols.size()));
    }
    ScoredPair p{std::string(cols[0]), std::string(cols[1]), std::string(cols[2]), {}};
    if (p.accepted_id == p.rejected_id) {
      throw Error(ErrorKind::kValidation, where + ": accepted and rejected are the same utterance");
    }
    if (!ids.insert(p.pair_id).second) {
      throw Error(ErrorKind::kValidation, where + ": duplicate pair_id '" + p.pair_id + "'");
    }
    for (std::size_t c = 3; c < cols.size(); ++c) {
      p.tags.emplace(std::string(header[c]), std::string(cols[c]));
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

void WritePairManifest(const std::vector<ScoredPair>& pairs, const fs::path& path) {
  std::set<std::string> tag_names;
  for (const auto& p : pairs)
    for (const auto& [k, v] : p.tags) tag_names.insert(k);
  std::string out = "pair_id\taccepted_id\trejected_id";
  for (const auto& k : tag_names) out += "\t" + k;
  out.push_back('\n');
  for (const auto& p : pairs) {
    out += p.pair_id + "\t" + p.accepted_id + "\t" + p.rejected_id;
    for (const auto& k : tag_names) {
      auto it = p.tags.find(k);
      out += "\t" + (it == p.tags.end() ? std::string() : it->second);
    }
    out.push_back('\n');
  }
  WriteTextFile(path, out);
}

std::vector<SimilarityRecord> ReadSimilarityGold(const fs::path& path) {
  const auto lines = Lines(ReadTextFile(path));
  if (lines.empty()) throw Error(ErrorKind::kFormat, Where(path, 1) + ": missing header");
  auto header = SplitChar(lines[0], '\t');
  if (header.size() < 4 || header[0] != "word_a" || header[1] != "word_b" ||
      header[2] != "score" || header[3] != "dataset") {
    throw Error(ErrorKind::kFormat,
                Where(path, 1) + ": header must be word_a, word_b, score, dataset");
  }
  struct Acc {
    SimilarityRecord record;
    double sum = 0.0;
    int count = 0;
  };
  std::vector<Acc> merged;
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> index;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (IsBlank(lines[n])) continue;
    const std::string where = Where(path, n + 1);
    auto cols = SplitChar(lines[n], '\t');
    if (cols.size() != header.size()) {
      throw Error(ErrorKind::kParse, where + ": expected " + std::to_string(header.size()) +
                                         " columns, found " + std::to_string(cols.size()));
    }
    const double score = ParseDouble(cols[2], where + " score");
    if (!(score >= 0.0 && score <= 10.0)) {
      throw Error(ErrorKind::kValidation, where + ": score must lie in [0, 10]");
    }
    std::string a(cols[0]), b(cols[1]), dataset(cols[3]);
    auto key = std::make_tuple(dataset, std::min(a, b), std::max(a, b));
    auto [it, inserted] = index.emplace(key, merged.size());
    if (inserted) merged.push_back(Acc{SimilarityRecord{a, b, 0.0, dataset}});
    merged[it->second].sum += score;
    merged[it->second].count += 1;
  }
  std::vector<SimilarityRecord> out;
  out.reserve(merged.size());
  for (auto& acc : merged) {
    acc.record.human_score = acc.sum / acc.count;
    out.push_back(std::move(acc.record));
  }
  return out;
}

std::vector<UtteranceRef> ReadUtteranceIndex(const fs::path& path) {
  const auto lines = Lines(ReadTextFile(path));
  if (lines.empty()) throw Error(ErrorKind::kFormat, Where(path, 1) + ": missing header");
  auto header = SplitChar(lines[0], '\t');
  if (header.size() < 2 || header.size() > 3 || header[0] != "utt_id" || header[1] != "word" ||
      (header.size() == 3 && header[2] != "voice")) {
    throw Error(ErrorKind::kFormat, Where(path, 1) + ": header must be utt_id, word[, voice]");
  }
  std::vector<UtteranceRef> refs;
  std::set<std::string> ids;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (IsBlank(lines[n])) continue;
    const std::string where = Where(path, n + 1);
    auto cols = SplitChar(lines[n], '\t');
    if (cols.size() != header.size()) {
      throw Error(ErrorKind::kParse, where + ": expected " + std::to_string(header.size()) +
                                         " columns, found " + std::to_string(cols.size()));
    }
    UtteranceRef r{std::string(cols[0]), std::string(cols[1]),
                   cols.size() == 3 ? std::string(cols[2]) : std::string()};
    if (!ids.insert(r.utt_id).second) {
      throw Error(ErrorKind::kValidation, where + ": duplicate utterance '" + r.utt_id + "'");
    }
    refs.push_back(std::move(r));
  }
  return refs;
}

std::map<std::string, double> ReadExternalScores(const fs::path& path) {
  const auto lines = Lines(ReadTextFile(path));
  std::map<std::string, double> scores;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (IsBlank(lines[n])) continue;
    const std::string where = Where(path, n + 1);
    auto cols = SplitChar(lines[n], '\t');
    if (n == 0 && cols.size() == 2 && cols[0] == "utt_id" && cols[1] == "log_score") continue;
    if (cols.size() != 2) {
      throw Error(ErrorKind::kParse, where + ": expected '<utt_id>\\t<log_score>'");
    }
    const double v = ParseDouble(cols[1], where + " log_score");
    if (std::isnan(v)) throw Error(ErrorKind::kNonFinite, where + ": NaN score");
    if (!scores.emplace(std::string(cols[0]), v).second) {
      throw Error(ErrorKind::kValidation, where + ": duplicate utterance '" +
                                              std::string(cols[0]) + "'");
    }
  }
  return scores;
}

void WriteExternalScores(const std::map<std::string, double>& scores, const fs::path& path) {
  std::string out = "utt_id\tlog_score\n";
  for (const auto& [id, v] : scores) out += id + "\t" + ShortestDouble(v) + "\n";
  WriteTextFile(path, out);
}

// ---------------------------------------------------------------------------
// Reports

std::string RenderReport(const MetricReport& r, ReportFormat format) {
  if (format == ReportFormat::kTsv) {
    std::string out = "aggregate\t" + FormatFixed6(r.aggregate) + "\n";
    for (const auto& [k, v] : r.config) out += "config." + EscapeTsv(k) + "\t" + EscapeTsv(v) + "\n";
    for (const auto& [k, v] : r.counts) out += "count." + EscapeTsv(k) + "\t" + std::to_string(v) + "\n";
    out += "metric\t" + EscapeTsv(r.metric) + "\n";
    for (const auto& [k, v] : r.subsets) out += "subset." + EscapeTsv(k) + "\t" + FormatFixed6(v) + "\n";
    return out;
  }
  auto quote = [](const std::string& s) { return nlohmann::json(s).dump(); };
  auto object = [&](const auto& map, auto render) {
    if (map.empty()) return std::string("{}");
    std::string out = "{\n";
    bool first = true;
    for (const auto& [k, v] : map) {
      if (!first) out += ",\n";
      first = false;
      out += "    " + quote(k) + ": " + render(v);
    }
    return out + "\n  }";
  };
  std::string out = "{\n";
  out += "  \"aggregate\": " + FormatFixed6(r.aggregate) + ",\n";
  out += "  \"config\": " + object(r.config, quote) + ",\n";
  out += "  \"counts\": " +
         object(r.counts, [](std::int64_t v) { return std::to_string(v); }) + ",\n";
  out += "  \"metric\": " + quote(r.metric) + ",\n";
  out += "  \"subsets\": " + object(r.subsets, [](double v) { return FormatFixed6(v); }) + "\n";
  out += "}\n";
  return out;
}

MetricReport ParseReport(const std::string& text, ReportFormat format) {
  MetricReport r;
  if (format == ReportFormat::kJson) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
      r.metric = j.at("metric").get<std::string>();
      r.aggregate = j.at("aggregate").get<double>();
      for (auto& [k, v] : j.at("config").items()) r.config[k] = v.get<std::string>();
      for (auto& [k, v] : j.at("counts").items()) r.counts[k] = v.get<std::int64_t>();
      for (auto& [k, v] : j.at("subsets").items()) r.subsets[k] = v.get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kFormat, std::string("malformed JSON report: ") + e.what());
    }
    return r;
  }
  std::size_t n = 0;
  for (const auto& line : Lines(text)) {
    ++n;
    if (IsBlank(line)) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorKind::kFormat, "report line " + std::to_string(n) + ": missing tab");
    }
    std::string key = UnescapeTsv(std::string_view(line).substr(0, tab));
    std::string_view value = std::string_view(line).substr(tab + 1);
    const std::string where = "report line " + std::to_string(n);
    if (key == "aggregate") {
      r.aggregate = ParseDouble(value, where);
    } else if (key == "metric") {
      r.metric = UnescapeTsv(value);
    } else if (key.starts_with("config.")) {
      r.config[key.substr(7)] = UnescapeTsv(value);
    } else if (key.starts_with("count.")) {
      r.counts[key.substr(6)] = ParseInt(value, where);
    } else if (key.starts_with("subset.")) {
      r.subsets[key.substr(7)] = ParseDouble(value, where);
    } else {
      throw Error(ErrorKind::kFormat, where + ": unknown key '" + key + "'");
    }
  }
  return r;
}

void WriteReport(const MetricReport& report, const fs::path& path, ReportFormat format) {
  WriteTextFile(path, RenderReport(report, format));
}

MetricReport ReadReport(const fs::path& path, ReportFormat format) {
  return ParseReport(ReadTextFile(path), format);
}

ReportFormat ReportFormatForPath(const fs::path& path) {
  return path.extension() == ".json" ? ReportFormat::kJson : ReportFormat::kTsv;
}

}  // namespace zrc
