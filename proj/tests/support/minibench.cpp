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

#include "minibench.hpp"

#include <cmath>
#include <cstdio>
#include <unistd.h>

#include "zrc/common.hpp"
#include "zrc/io_formats.hpp"
#include "zrc/sampler.hpp"
#include "zrc/scoring.hpp"

namespace zrc::testing {

namespace fs = std::filesystem;

namespace {

std::string Fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

std::string Id(const char* prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%03d", prefix, i);
  return buf;
}

double Gauss(Rng& rng) {
  const double u1 = 1.0 - rng.Uniform();
  const double u2 = rng.Uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

void WriteAbxPart(const MiniBench& b, Rng& rng) {
  constexpr std::size_t kDim = 4;
  constexpr int kTokenFrames = 5;
  const std::vector<std::vector<double>> prototypes = {{1, 0.2, 0, 0}, {0, 0.2, 1, 0}};
  const char* centers[] = {"b", "d"};
  const std::pair<const char*, const char*> contexts[] = {{"ah", "iy"}, {"eh", "uw"}};
  const char* speakers[] = {"s1", "s2"};
  fs::create_directories(b.Path("feats"));

  std::vector<TriphoneToken> items;
  int utt = 0;
  for (const auto& [left, right] : contexts) {
    for (int c = 0; c < 2; ++c) {
      for (const char* spk : speakers) {
        FeatureSequence seq;
        seq.utt_id = Id("utt", utt);
        seq.frame_rate = 100.0;
        seq.frames = Matrix(0, kDim);
        for (int k = 0; k < 5; ++k) {
          TriphoneToken t;
          t.file_id = seq.utt_id;
          t.onset = 0.05 * k;
          t.offset = 0.05 * (k + 1);
          t.center = centers[c];
          t.left = left;
          t.right = right;
          t.speaker = spk;
          items.push_back(t);
          for (int f = 0; f < kTokenFrames; ++f) {
            std::vector<double> row(kDim);
            for (std::size_t d = 0; d < kDim; ++d) {
              row[d] = prototypes[static_cast<std::size_t>(c)][d] + 0.35 * Gauss(rng);
            }
            seq.frames.AppendRow(row);
          }
        }
        const auto ext = utt % 2 == 0 ? ".zrcf" : ".txt";
        if (utt % 2 == 0) {
          WriteFeatureBinary(seq, b.Path("feats") / (seq.utt_id + ext));
        } else {
          WriteFeatureText(seq, b.Path("feats") / (seq.utt_id + ext));
        }
        ++utt;
      }
    }
  }
  WriteItemFile(items, b.Path("items.item"));
}

void WriteLanguagePart(const MiniBench& b, Rng& rng) {
  constexpr int kUnits = 8;
  std::vector<UnitSequence> seqs;
  for (int i = 0; i < 200; ++i) {
    UnitSequence s{Id("seq", i), {}};
    const int len = 4 + static_cast<int>(rng.Below(7));
    std::int32_t prev = static_cast<std::int32_t>(rng.Below(kUnits));
    for (int t = 0; t < len; ++t) {
      // Mostly step to the next unit so the bigram has something to learn.
      prev = rng.Uniform() < 0.6 ? (prev + 1) % kUnits
                                 : static_cast<std::int32_t>(rng.Below(kUnits));
      s.units.push_back(prev);
    }
    seqs.push_back(std::move(s));
  }
  WriteUnitSequences(seqs, b.Path("units.txt"));

  std::vector<ScoredPair> pairs;
  for (int i = 0; i < 50; ++i) {
    ScoredPair p;
    p.pair_id = Id("pair", i);
    p.accepted_id = seqs[static_cast<std::size_t>(2 * i)].utt_id;
    p.rejected_id = seqs[static_cast<std::size_t>(2 * i + 1)].utt_id;
    p.tags["paradigm"] = Id("p", i % 3);
    p.tags["length_bin"] = seqs[static_cast<std::size_t>(2 * i)].units.size() < 7 ? "short" : "long";
    pairs.push_back(std::move(p));
  }
  WritePairManifest(pairs, b.Path("pairs.tsv"));

  std::string windows = "utt_id\ti\tj\tlog_p\n";
  const SpanConfig cfg{};
  for (const auto& s : seqs) {
    for (auto [first, last] : SpanWindows(s.units.size(), cfg)) {
      const double width = static_cast<double>(last - first + 1);
      const double lp = -width * (1.6 + 0.4 * rng.Uniform());
      windows += s.utt_id + "\t" + std::to_string(first) + "\t" + std::to_string(last) + "\t" +
                 Fmt("%.6f", lp) + "\n";
    }
  }
  WriteTextFile(b.Path("windows.tsv"), windows);
}

void WriteSemanticPart(const MiniBench& b, Rng& rng) {
  constexpr std::size_t kDim = 6;
  constexpr int kWords = 10;
  std::vector<std::vector<double>> latent(kWords, std::vector<double>(kDim));
  for (auto& v : latent)
    for (auto& x : v) x = Gauss(rng);

  std::string index = "utt_id\tword\tvoice\n";
  fs::create_directories(b.Path("layer0"));
  fs::create_directories(b.Path("layer1"));
  int utt = 0;
  for (int w = 0; w < kWords; ++w) {
    for (const char* voice : {"v1", "v2"}) {
      const std::string id = Id("word", utt++);
      index += id + "\t" + Id("w", w) + "\t" + voice + "\n";
      for (int layer = 0; layer < 2; ++layer) {
        FeatureSequence seq{id, 100.0, Matrix(0, kDim)};
        const double noise = layer == 0 ? 2.0 : 0.3;
        for (int f = 0; f < 4; ++f) {
          std::vector<double> row(kDim);
          for (std::size_t d = 0; d < kDim; ++d) {
            row[d] = latent[static_cast<std::size_t>(w)][d] + noise * Gauss(rng);
          }
          seq.frames.AppendRow(row);
        }
        WriteFeatureText(seq, b.Path(layer == 0 ? "layer0" : "layer1") / (id + ".txt"));
      }
    }
  }
  WriteTextFile(b.Path("utterances.tsv"), index);

  std::string gold = "word_a\tword_b\tscore\tdataset\n";
  int records = 0;
  for (int a = 0; a < kWords && records < 20; ++a) {
    for (int c = a + 1; c < kWords && records < 20; c += 3) {
      const auto& x = latent[static_cast<std::size_t>(a)];
      const auto& y = latent[static_cast<std::size_t>(c)];
      double xy = 0, xx = 0, yy = 0;
      for (std::size_t d = 0; d < kDim; ++d) {
        xy += x[d] * y[d];
        xx += x[d] * x[d];
        yy += y[d] * y[d];
      }
      double score = 5.0 + 5.0 * xy / std::sqrt(xx * yy) + 0.5 * Gauss(rng);
      score = std::min(10.0, std::max(0.0, score));
      gold += Id("w", a) + "\t" + Id("w", c) + "\t" + Fmt("%.2f", score) + "\tsynthetic\n";
      ++records;
    }
  }
  WriteTextFile(b.Path("gold.tsv"), gold);
}

void WriteSamplerPart(const MiniBench& b, Rng& rng) {
  CandidateSet set;
  set.score_count = 2;
  for (int i = 0; i < 30; ++i) {
    Anchor a;
    a.id = Id("word", i);
    a.stratum = i % 2 == 0 ? "freq_hi" : "freq_lo";
    a.scores = {-3.0 - rng.Uniform(), -6.0 - 2.0 * rng.Uniform()};
    for (int k = 0; k < 3; ++k) {
      a.candidates.push_back(
          Candidate{a.id + "_nw" + std::to_string(k),
                    {-3.3 - rng.Uniform(), -6.5 - 2.0 * rng.Uniform()}});
    }
    set.anchors.push_back(std::move(a));
  }
  WriteCandidateSet(set, b.Path("candidates.tsv"));

  std::string pool = "pair_id\tparadigm\tacc_1\tacc_2\trej_1\trej_2\n";
  for (int i = 0; i < 40; ++i) {
    pool += Id("sent", i) + "\t" + (i % 2 ? "agreement" : "island");
    for (int k = 0; k < 4; ++k) pool += "\t" + Fmt("%.4f", -10.0 - 4.0 * rng.Uniform());
    pool += "\n";
  }
  WriteTextFile(b.Path("sentences.tsv"), pool);
}

}  // namespace

MiniBench WriteMiniBench(const fs::path& root, std::uint64_t seed) {
  MiniBench bench{root};
  fs::create_directories(root);
  Rng rng(seed);
  WriteAbxPart(bench, rng);
  WriteLanguagePart(bench, rng);
  WriteSemanticPart(bench, rng);
  WriteSamplerPart(bench, rng);
  return bench;
}

std::vector<std::vector<std::string>> MiniBenchCommands(const MiniBench& b, const fs::path& out) {
  auto in = [&](const char* name) { return b.Path(name).string(); };
  auto o = [&](const char* name) { return (out / name).string(); };
  return {
      {"abx", "--items", in("items.item"), "--features", in("feats"), "--mode", "within",
       "--distance", "angular", "--out", o("abx_within.json")},
      {"abx", "--items", in("items.item"), "--features", in("feats"), "--mode", "across",
       "--out", o("abx_across.tsv")},
      {"kmeans-train", "--features", in("feats"), "--k", "8", "--seed", "3", "--out",
       o("codebook.zrck"), "--report", o("kmeans.json")},
      {"quantize", "--codebook", o("codebook.zrck"), "--features", in("feats"), "--out",
       o("quantized.txt"), "--report", o("quantize.tsv")},
      {"ngram-train", "--units", in("units.txt"), "--order", "2", "--alpha", "1", "--out",
       o("bigram.json"), "--report", o("ngram.tsv")},
      {"score-lexical", "--pairs", in("pairs.tsv"), "--ngram", o("bigram.json"), "--units",
       in("units.txt"), "--tie", "half", "--out", o("lexical.json"), "--scores-out",
       o("lexical_scores.tsv")},
      {"score-syntactic", "--pairs", in("pairs.tsv"), "--window-scores", in("windows.tsv"),
       "--units", in("units.txt"), "--out", o("syntactic.tsv")},
      {"score-semantic", "--gold", in("gold.tsv"), "--utterances", in("utterances.tsv"),
       "--layers", in("layer0") + "," + in("layer1"), "--subset", "synthetic", "--out",
       o("semantic.json")},
      {"sample-pairs", "--candidates", in("candidates.tsv"), "--seed", "42", "--restarts", "8",
       "--out", o("assignment.tsv"), "--report", o("balance.json")},
      {"sample-pairs", "--sentence-pool", in("sentences.tsv"), "--target", "20", "--seed", "5",
       "--restarts", "4", "--out", o("sentences_chosen.tsv"), "--report", o("sentences.tsv")},
  };
}

fs::path TempDir(const std::string& tag) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() /
                       ("zrc_" + tag + "_" + std::to_string(::getpid()) + "_" +
                        std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace zrc::testing
