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

// Readers and writers for every file that crosses the toolkit boundary.
//
//   item file        #file onset offset #phone prev-phone next-phone speaker
//   feature (text)   "dim=<D> rate=<R>" then one row of D floats per line
//   feature (binary) "ZRCF" u32 version=1, u32 D, f32 rate, u64 T, T*D f32 LE
//   unit sequences   "<utt_id> u1 u2 ... uT" per line
//   pair manifest    TSV, header "pair_id accepted_id rejected_id [tag...]"
//   similarity gold  TSV, header "word_a word_b score dataset"
//   external scores  TSV "<utt_id> <log_score>", optional header
//   utterance index  TSV, header "utt_id word [voice]"
//   reports          TSV (key/value lines) or JSON, keys sorted, %.6f floats
//
// All text formats are parsed locale-independently.

#ifndef ZRC_IO_FORMATS_HPP_
#define ZRC_IO_FORMATS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "zrc/common.hpp"

namespace zrc {

struct TriphoneToken {
  std::string file_id;
  double onset = 0.0;   // seconds
  double offset = 0.0;  // seconds, > onset
  std::string center;
  std::string left;
  std::string right;
  std::string speaker;

  bool operator==(const TriphoneToken&) const = default;
};

struct FeatureSequence {
  std::string utt_id;
  double frame_rate = 100.0;  // Hz
  Matrix frames;              // T x D

  std::size_t dim() const { return frames.cols(); }
  std::size_t length() const { return frames.rows(); }
  bool operator==(const FeatureSequence&) const = default;
};

struct UnitSequence {
  std::string utt_id;
  std::vector<std::int32_t> units;

  bool operator==(const UnitSequence&) const = default;
};

struct ScoredPair {
  std::string pair_id;
  std::string accepted_id;
  std::string rejected_id;
  std::map<std::string, std::string> tags;

  bool operator==(const ScoredPair&) const = default;
};

struct SimilarityRecord {
  std::string word_a;
  std::string word_b;
  double human_score = 0.0;  // [0, 10]
  std::string dataset;
};

/// One row of an utterance index: which word an utterance realizes and in
/// which voice (empty for natural speech).
struct UtteranceRef {
  std::string utt_id;
  std::string word;
  std::string voice;
};

struct MetricReport {
  std::string metric;
  double aggregate = 0.0;
  std::map<std::string, double> subsets;
  std::map<std::string, std::int64_t> counts;
  std::map<std::string, std::string> config;

  bool operator==(const MetricReport&) const = default;
};

enum class ReportFormat { kTsv, kJson };

std::vector<TriphoneToken> ReadItemFile(const std::filesystem::path& path);
void WriteItemFile(const std::vector<TriphoneToken>& items,
                   const std::filesystem::path& path);

/// Reads a feature file in either encoding (detected from the magic bytes).
FeatureSequence ReadFeatureFile(const std::filesystem::path& path,
                                const std::string& utt_id);
void WriteFeatureText(const FeatureSequence& seq, const std::filesystem::path& path);
void WriteFeatureBinary(const FeatureSequence& seq, const std::filesystem::path& path);

/// Throws kNonFinite if any value is NaN/inf, kDomain if `probability_rows`
/// and some row is not a distribution (non-negative, sums to 1 within 1e-6).
void ValidateFeatures(const FeatureSequence& seq, bool probability_rows = false);

/// Per-utterance feature files in one directory, looked up as
/// `<dir>/<utt_id>.zrcf` (binary) or `<dir>/<utt_id>.txt` (text).
/// Loaded sequences are cached; lookups are thread-safe.
class FeatureArchive {
 public:
  FeatureArchive() = default;
  explicit FeatureArchive(std::filesystem::path dir);

  /// In-memory archive; used by tests and the Python bindings.
  void Insert(FeatureSequence seq);

  const FeatureSequence& Get(const std::string& utt_id) const;
  bool Contains(const std::string& utt_id) const;
  /// Utterance ids found on disk plus inserted ones, sorted.
  std::vector<std::string> Ids() const;

 private:
  std::filesystem::path dir_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::shared_ptr<const FeatureSequence>> cache_;
};

/// Reads `<dir>/<utt_id>` in either encoding.
FeatureSequence ReadFeatureArchive(const std::filesystem::path& dir,
                                   const std::string& utt_id);

std::vector<UnitSequence> ReadUnitSequences(const std::filesystem::path& path);
void WriteUnitSequences(const std::vector<UnitSequence>& seqs,
                        const std::filesystem::path& path);

std::vector<ScoredPair> ReadPairManifest(const std::filesystem::path& path);
void WritePairManifest(const std::vector<ScoredPair>& pairs,
                       const std::filesystem::path& path);

/// Rows naming the same unordered word pair within one dataset are merged
/// into one record carrying the mean score (first occurrence keeps its order).
std::vector<SimilarityRecord> ReadSimilarityGold(const std::filesystem::path& path);

/// TSV with header "utt_id word" and an optional third "voice" column.
std::vector<UtteranceRef> ReadUtteranceIndex(const std::filesystem::path& path);

std::map<std::string, double> ReadExternalScores(const std::filesystem::path& path);
void WriteExternalScores(const std::map<std::string, double>& scores,
                         const std::filesystem::path& path);

std::string RenderReport(const MetricReport& report, ReportFormat format);
MetricReport ParseReport(const std::string& text, ReportFormat format);
void WriteReport(const MetricReport& report, const std::filesystem::path& path,
                 ReportFormat format);
MetricReport ReadReport(const std::filesystem::path& path, ReportFormat format);
/// json for a ".json" extension, tsv otherwise.
ReportFormat ReportFormatForPath(const std::filesystem::path& path);

// Small helpers shared by the other readers.
std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, const std::string& contents);

}  // namespace zrc

#endif  // ZRC_IO_FORMATS_HPP_
