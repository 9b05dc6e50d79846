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

#include "zrc/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <optional>

#include "CLI11.hpp"
#include "zrc/abx.hpp"
#include "zrc/io_formats.hpp"
#include "zrc/metrics.hpp"
#include "zrc/quantizer.hpp"
#include "zrc/sampler.hpp"
#include "zrc/scoring.hpp"

namespace zrc {

namespace fs = std::filesystem;

namespace {

std::string Num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string Join(const std::vector<std::string>& items, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

// Options shared by every subcommand that writes a report.
struct Output {
  std::string out;
  std::string format = "auto";
  std::size_t threads = 0;

  void Attach(CLI::App* cmd, bool required = true, const char* what = "report path") {
    auto* opt = cmd->add_option("--out", out, what);
    if (required) opt->required();
    cmd->add_option("--format", format, "report format: tsv, json or auto (by extension)")
        ->check(CLI::IsMember({"auto", "tsv", "json"}))
        ->capture_default_str();
    cmd->add_option("--threads", threads,
                    "worker threads (0: $ZRC_EVAL_THREADS, else 1)")
        ->capture_default_str();
  }

  ReportFormat Format(const std::string& path) const {
    if (format == "tsv") return ReportFormat::kTsv;
    if (format == "json") return ReportFormat::kJson;
    return ReportFormatForPath(path);
  }
};

void Emit(MetricReport report, const std::string& path, const Output& output) {
  report.config["format"] = output.format;
  WriteReport(report, path, output.Format(path));
}

std::map<std::string, FeatureSequence> LoadAll(const std::string& dir) {
  FeatureArchive archive{fs::path(dir)};
  std::map<std::string, FeatureSequence> out;
  for (const auto& id : archive.Ids()) out.emplace(id, archive.Get(id));
  if (out.empty()) throw Error(ErrorKind::kNotFound, "no feature files in " + dir);
  return out;
}

// ---------------------------------------------------------------------------
// abx

struct AbxArgs {
  std::string items, features, units;
  std::string mode = "within";
  std::string distance = "angular";
  std::int32_t codebook_size = kDefaultCodebookSize;
  double frame_rate = 100.0;
  Output output;
};

void RunAbx(const AbxArgs& a) {
  const auto items = ReadItemFile(a.items);
  const auto mode = ParseAbxMode(a.mode);
  const auto metric = ParseFrameMetric(a.distance);
  std::int64_t dropped = 0;
  std::vector<AbxToken> tokens;
  if (!a.units.empty()) {
    tokens = ExtractTokensFromUnits(items, ReadUnitSequences(a.units), a.codebook_size,
                                    a.frame_rate, &dropped);
  } else {
    FeatureArchive archive{fs::path(a.features)};
    tokens = ExtractTokens(items, archive, &dropped);
  }
  auto result = AbxEvaluate(tokens, mode, metric, ResolveThreads(a.output.threads));
  result.dropped_tokens = dropped;
  auto report = AbxReport(result, metric);
  report.config["items"] = a.items;
  if (!a.units.empty()) {
    report.config["units"] = a.units;
    report.config["codebook_size"] = std::to_string(a.codebook_size);
    report.config["frame_rate"] = Num(a.frame_rate);
  } else {
    report.config["features"] = a.features;
  }
  Emit(report, a.output.out, a.output);
}

// ---------------------------------------------------------------------------
// kmeans-train / quantize

struct KMeansArgs {
  std::string features;
  std::int32_t k = kDefaultCodebookSize;
  std::uint64_t seed = 0;
  std::int32_t max_iter = 100;
  double tol = 1e-4;
  std::size_t max_frames = 0;
  std::string report;
  Output output;
};

void RunKMeans(const KMeansArgs& a) {
  const auto seqs = LoadAll(a.features);
  Matrix pooled(0, seqs.begin()->second.dim());
  double rate = seqs.begin()->second.frame_rate;
  for (const auto& [id, seq] : seqs) {
    if (seq.dim() != pooled.cols()) {
      throw Error(ErrorKind::kDimensionMismatch, id + ": feature dim differs from other files");
    }
    for (std::size_t t = 0; t < seq.length(); ++t) pooled.AppendRow(seq.frames.row(t));
  }
  const std::size_t total = pooled.rows();
  if (a.max_frames > 0) pooled = ReservoirSubsample(pooled, a.max_frames, a.seed);
  KMeansOptions opts;
  opts.k = a.k;
  opts.seed = a.seed;
  opts.max_iter = a.max_iter;
  opts.tol = a.tol;
  opts.frame_rate = rate;
  opts.threads = ResolveThreads(a.output.threads);
  const auto cb = KMeansFit(pooled, opts);
  WriteCodebook(cb, a.output.out);
  if (!a.report.empty()) {
    MetricReport r;
    r.metric = "kmeans";
    r.aggregate = cb.inertia;
    r.counts["iterations"] = cb.iterations;
    r.counts["frames_total"] = static_cast<std::int64_t>(total);
    r.counts["frames_used"] = static_cast<std::int64_t>(pooled.rows());
    r.counts["k"] = cb.size();
    r.counts["dim"] = static_cast<std::int64_t>(cb.dim());
    r.config = {{"features", a.features}, {"k", std::to_string(a.k)},
                {"seed", std::to_string(a.seed)}, {"max_iter", std::to_string(a.max_iter)},
                {"tol", Num(a.tol)}, {"max_frames", std::to_string(a.max_frames)},
                {"out", a.output.out}};
    Emit(r, a.report, a.output);
  }
}

struct QuantizeArgs {
  std::string codebook, features, report;
  Output output;
};

void RunQuantize(const QuantizeArgs& a) {
  const auto cb = ReadCodebook(a.codebook);
  const auto seqs = LoadAll(a.features);
  std::vector<const FeatureSequence*> work;
  for (const auto& [id, seq] : seqs) work.push_back(&seq);
  std::vector<UnitSequence> units(work.size());
  ParallelFor(work.size(), ResolveThreads(a.output.threads),
              [&](std::size_t i) { units[i] = Quantize(cb, *work[i]); });
  WriteUnitSequences(units, a.output.out);
  if (!a.report.empty()) {
    MetricReport r;
    r.metric = "quantize";
    std::int64_t frames = 0;
    std::set<std::int32_t> used;
    for (const auto& u : units) {
      frames += static_cast<std::int64_t>(u.units.size());
      used.insert(u.units.begin(), u.units.end());
    }
    r.aggregate = static_cast<double>(used.size()) / static_cast<double>(cb.size());
    r.counts["utterances"] = static_cast<std::int64_t>(units.size());
    r.counts["frames"] = frames;
    r.counts["units_used"] = static_cast<std::int64_t>(used.size());
    r.config = {{"codebook", a.codebook}, {"features", a.features}, {"out", a.output.out}};
    Emit(r, a.report, a.output);
  }
}

// ---------------------------------------------------------------------------
// ngram-train

struct NgramArgs {
  std::string units, report;
  std::int32_t order = 2;
  double alpha = 1.0;
  Output output;
};

void RunNgram(const NgramArgs& a) {
  const auto corpus = ReadUnitSequences(a.units);
  const auto model = NgramModel::Train(corpus, a.order, a.alpha);
  model.Save(a.output.out);
  if (!a.report.empty()) {
    MetricReport r;
    r.metric = "ngram";
    double total = 0.0;
    std::int64_t tokens = 0;
    for (const auto& s : corpus) {
      total += ChainRuleLogProb(model, s).log_score;
      tokens += static_cast<std::int64_t>(s.units.size()) + 1;
    }
    r.aggregate = total / static_cast<double>(tokens);  // mean log-prob per token
    r.counts["sequences"] = static_cast<std::int64_t>(corpus.size());
    r.counts["tokens"] = tokens;
    r.counts["vocabulary"] = static_cast<std::int64_t>(model.vocabulary().size());
    r.config = {{"units", a.units}, {"order", std::to_string(a.order)},
                {"alpha", Num(a.alpha)}, {"out", a.output.out}};
    Emit(r, a.report, a.output);
  }
}

// ---------------------------------------------------------------------------
// score-lexical / score-syntactic

struct PairScoreArgs {
  std::string pairs, scores, ngram, window_scores, units, scores_out;
  std::string tie = "half";
  std::int32_t span = SpanConfig{}.span;
  std::int32_t stride = SpanConfig{}.stride;
  bool per_token = false;
  Output output;
};

void RunPairScore(const PairScoreArgs& a, const std::string& metric) {
  const auto pairs = ReadPairManifest(a.pairs);
  const auto ties = ParseTiePolicy(a.tie);
  const int sources = !a.scores.empty() + !a.ngram.empty() + !a.window_scores.empty();
  if (sources != 1) {
    throw Error(ErrorKind::kValidation,
                "give exactly one of --scores, --ngram or --window-scores");
  }
  std::map<std::string, double> scores;
  std::map<std::string, std::string> config{{"pairs", a.pairs}, {"tie", a.tie}};
  if (!a.scores.empty()) {
    scores = ReadExternalScores(a.scores);
    config["scores"] = a.scores;
  } else {
    if (a.units.empty()) {
      throw Error(ErrorKind::kValidation, "--units is required with --ngram/--window-scores");
    }
    const auto seqs = ReadUnitSequences(a.units);
    std::vector<double> values(seqs.size());
    config["units"] = a.units;
    config["per_token"] = a.per_token ? "true" : "false";
    const std::size_t threads = ResolveThreads(a.output.threads);
    if (!a.ngram.empty()) {
      const auto model = NgramModel::Load(a.ngram);
      config["ngram"] = a.ngram;
      ParallelFor(seqs.size(), threads, [&](std::size_t i) {
        values[i] = ChainRuleLogProb(model, seqs[i]).log_score;
        if (a.per_token) values[i] /= static_cast<double>(seqs[i].units.size());
      });
    } else {
      const auto table = ExternalWindowScorer::Load(a.window_scores);
      const SpanConfig cfg{a.span, a.stride};
      config["window_scores"] = a.window_scores;
      config["span"] = std::to_string(a.span);
      config["stride"] = std::to_string(a.stride);
      ParallelFor(seqs.size(), threads, [&](std::size_t i) {
        values[i] = SpanPseudoProb(table, seqs[i], cfg, a.per_token).log_score;
      });
    }
    for (std::size_t i = 0; i < seqs.size(); ++i) {
      if (!scores.emplace(seqs[i].utt_id, values[i]).second) {
        throw Error(ErrorKind::kValidation, "duplicate utterance '" + seqs[i].utt_id + "'");
      }
    }
    if (!a.scores_out.empty()) WriteExternalScores(scores, a.scores_out);
  }
  auto report = AccuracyMetricReport(metric, PairedAccuracy(pairs, scores, ties));
  for (auto& [k, v] : config) report.config[k] = v;
  Emit(report, a.output.out, a.output);
}

// ---------------------------------------------------------------------------
// score-semantic

struct SemanticArgs {
  std::string gold, dev_gold, utterances;
  std::vector<std::string> layers;
  std::vector<std::string> poolings{"mean", "max", "min"};
  std::string subset = "synthetic";
  Output output;
};

std::vector<LayerOutputs> LoadLayers(const std::vector<std::string>& dirs,
                                     const std::vector<UtteranceRef>& index) {
  std::vector<LayerOutputs> layers;
  for (const auto& dir : dirs) {
    FeatureArchive archive{fs::path(dir)};
    LayerOutputs layer;
    for (const auto& ref : index) {
      layer[ref.word].push_back(HiddenToken{ref.voice, archive.Get(ref.utt_id).frames});
    }
    layers.push_back(std::move(layer));
  }
  return layers;
}

void RunSemantic(const SemanticArgs& a) {
  const auto gold = ReadSimilarityGold(a.gold);
  const auto dev = a.dev_gold.empty() ? gold : ReadSimilarityGold(a.dev_gold);
  const auto subset = ParseSimilaritySubset(a.subset);
  std::vector<Pooling> poolings;
  for (const auto& p : a.poolings) poolings.push_back(ParsePooling(p));
  const auto layers = LoadLayers(a.layers, ReadUtteranceIndex(a.utterances));
  const auto sweep = LayerSweep(layers, poolings, dev, subset);
  const double score = SimilarityScore(
      gold, PoolLayer(layers[static_cast<std::size_t>(sweep.layer)], sweep.pooling, sweep.layer),
      subset);

  MetricReport r;
  r.metric = "semantic";
  r.aggregate = score;
  for (const auto& [k, v] : sweep.all_scores) r.subsets["dev." + k] = v;
  r.counts["records"] = static_cast<std::int64_t>(gold.size());
  r.counts["dev_records"] = static_cast<std::int64_t>(dev.size());
  r.counts["best_layer"] = sweep.layer;
  r.config = {{"gold", a.gold},
              {"dev_gold", a.dev_gold.empty() ? a.gold : a.dev_gold},
              {"utterances", a.utterances},
              {"layers", Join(a.layers)},
              {"poolings", Join(a.poolings)},
              {"subset", a.subset},
              {"best_pooling", std::string(PoolingName(sweep.pooling))}};
  Emit(r, a.output.out, a.output);
}

// ---------------------------------------------------------------------------
// sample-pairs

struct SampleArgs {
  std::string candidates, sentence_pool, report;
  std::size_t target = 0;
  std::uint64_t seed = 0;
  std::size_t restarts = 1;
  bool no_stratify = false;
  Output output;
};

void RunSample(const SampleArgs& a) {
  if (a.candidates.empty() == a.sentence_pool.empty()) {
    throw Error(ErrorKind::kValidation, "give exactly one of --candidates or --sentence-pool");
  }
  SamplerOptions opts;
  opts.seed = a.seed;
  opts.restarts = a.restarts;
  opts.threads = ResolveThreads(a.output.threads);
  opts.stratify = !a.no_stratify;

  MetricReport r;
  r.metric = "balance";
  r.config = {{"seed", std::to_string(a.seed)},
              {"restarts", std::to_string(a.restarts)},
              {"stratify", opts.stratify ? "true" : "false"},
              {"out", a.output.out}};
  if (!a.candidates.empty()) {
    const auto set = ReadCandidateSet(a.candidates);
    const auto result = SampleWordPairs(set, opts);
    WriteAssignment(result, set, a.output.out);
    r.aggregate = result.objective;
    std::map<std::string, BalanceTally> strata;
    BalanceTally all(set.score_count);
    for (std::size_t i = 0; i < set.anchors.size(); ++i) {
      const auto& anchor = set.anchors[i];
      const auto& cand = anchor.candidates[static_cast<std::size_t>(result.chosen[i])];
      all.Add(anchor.scores, cand.scores);
      strata.try_emplace(anchor.stratum, set.score_count).first->second.Add(anchor.scores,
                                                                            cand.scores);
    }
    for (std::size_t m = 0; m < set.score_count; ++m) {
      const std::string s = "s_" + std::to_string(m + 1);
      r.subsets["accuracy." + s] = all.Accuracy(m);
      for (const auto& [name, tally] : strata) {
        r.subsets["stratum." + name + "." + s] = tally.Accuracy(m);
      }
    }
    r.counts["anchors"] = static_cast<std::int64_t>(set.anchors.size());
    r.counts["restart"] = static_cast<std::int64_t>(result.restart);
    r.config["candidates"] = a.candidates;
  } else {
    const auto pool = ReadSentencePool(a.sentence_pool);
    const auto result = SampleSentencePairs(pool, a.target, opts);
    WriteSentenceSelection(result, pool, a.output.out);
    r.aggregate = result.objective;
    const std::size_t m_count = pool.front().accepted_scores.size();
    std::map<std::string, BalanceTally> strata;
    BalanceTally all(m_count);
    for (auto i : result.chosen) {
      all.Add(pool[i].accepted_scores, pool[i].rejected_scores);
      strata.try_emplace(pool[i].paradigm, m_count)
          .first->second.Add(pool[i].accepted_scores, pool[i].rejected_scores);
    }
    for (std::size_t m = 0; m < m_count; ++m) {
      const std::string s = "s_" + std::to_string(m + 1);
      r.subsets["accuracy." + s] = all.Accuracy(m);
      for (const auto& [name, tally] : strata) {
        r.subsets["paradigm." + name + "." + s] = tally.Accuracy(m);
      }
    }
    r.counts["pool"] = static_cast<std::int64_t>(pool.size());
    r.counts["chosen"] = static_cast<std::int64_t>(result.chosen.size());
    r.counts["restart"] = static_cast<std::int64_t>(result.restart);
    r.config["sentence_pool"] = a.sentence_pool;
    r.config["target"] = std::to_string(a.target);
  }
  if (!a.report.empty()) Emit(r, a.report, a.output);
}

std::string OneLine(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero-resource spoken language model evaluation toolkit", "zrc-eval"};
  app.require_subcommand(1);

  AbxArgs abx;
  auto* abx_cmd = app.add_subcommand("abx", "phonetic ABX error rate over minimal triphone pairs");
  abx_cmd->add_option("--items", abx.items, "item file")->required();
  auto* feat_opt = abx_cmd->add_option("--features", abx.features, "feature archive directory");
  auto* unit_opt = abx_cmd->add_option("--units", abx.units, "unit sequences (one-hot scored)");
  feat_opt->excludes(unit_opt);
  abx_cmd->add_option("--mode", abx.mode, "within or across")
      ->check(CLI::IsMember({"within", "across"}))
      ->capture_default_str();
  abx_cmd->add_option("--distance", abx.distance, "angular or kl")
      ->check(CLI::IsMember({"angular", "kl"}))
      ->capture_default_str();
  abx_cmd->add_option("--codebook-size", abx.codebook_size, "K for one-hot units")
      ->capture_default_str();
  abx_cmd->add_option("--frame-rate", abx.frame_rate, "unit rate in Hz")->capture_default_str();
  abx.output.Attach(abx_cmd);

  KMeansArgs km;
  auto* km_cmd = app.add_subcommand("kmeans-train", "fit a k-means codebook on pooled frames");
  km_cmd->add_option("--features", km.features, "feature archive directory")->required();
  km_cmd->add_option("--k", km.k, "number of clusters")->capture_default_str();
  km_cmd->add_option("--seed", km.seed, "k-means++ and subsampling seed")->capture_default_str();
  km_cmd->add_option("--max-iter", km.max_iter, "Lloyd iteration cap")->capture_default_str();
  km_cmd->add_option("--tol", km.tol, "relative inertia improvement to stop")
      ->capture_default_str();
  km_cmd->add_option("--max-frames", km.max_frames, "reservoir-subsample to this many (0: all)")
      ->capture_default_str();
  km_cmd->add_option("--report", km.report, "optional training report");
  km.output.Attach(km_cmd, true, "codebook path");

  QuantizeArgs qz;
  auto* qz_cmd = app.add_subcommand("quantize", "map features to unit sequences");
  qz_cmd->add_option("--codebook", qz.codebook, "codebook file")->required();
  qz_cmd->add_option("--features", qz.features, "feature archive directory")->required();
  qz_cmd->add_option("--report", qz.report, "optional report");
  qz.output.Attach(qz_cmd, true, "unit sequence path");

  NgramArgs ng;
  auto* ng_cmd = app.add_subcommand("ngram-train", "train an additive-smoothed n-gram model");
  ng_cmd->add_option("--units", ng.units, "training unit sequences")->required();
  ng_cmd->add_option("--order", ng.order, "n")->capture_default_str();
  ng_cmd->add_option("--alpha", ng.alpha, "additive smoothing constant")->capture_default_str();
  ng_cmd->add_option("--report", ng.report, "optional report");
  ng.output.Attach(ng_cmd, true, "model JSON path");

  PairScoreArgs lex, syn;
  auto attach_pairs = [](CLI::App* cmd, PairScoreArgs& a) {
    cmd->add_option("--pairs", a.pairs, "pair manifest")->required();
    cmd->add_option("--scores", a.scores, "external log-score table");
    cmd->add_option("--ngram", a.ngram, "n-gram model (chain-rule scoring of --units)");
    cmd->add_option("--window-scores", a.window_scores,
                    "masked window log-probabilities (span scoring of --units)");
    cmd->add_option("--units", a.units, "unit sequences to score");
    cmd->add_option("--span", a.span, "decoding span size M_d")->capture_default_str();
    cmd->add_option("--stride", a.stride, "window stride delta_t")->capture_default_str();
    cmd->add_flag("--per-token", a.per_token, "divide scores by sequence length");
    cmd->add_option("--tie", a.tie, "tie credit: half or zero")
        ->check(CLI::IsMember({"half", "zero"}))
        ->capture_default_str();
    cmd->add_option("--scores-out", a.scores_out, "write the computed scores here");
    a.output.Attach(cmd);
  };
  auto* lex_cmd = app.add_subcommand("score-lexical", "spot-the-word accuracy");
  attach_pairs(lex_cmd, lex);
  auto* syn_cmd = app.add_subcommand("score-syntactic", "acceptability accuracy");
  attach_pairs(syn_cmd, syn);

  SemanticArgs sem;
  auto* sem_cmd = app.add_subcommand("score-semantic", "semantic similarity (Spearman x 100)");
  sem_cmd->add_option("--gold", sem.gold, "similarity gold TSV")->required();
  sem_cmd->add_option("--dev-gold", sem.dev_gold, "gold used to pick layer and pooling");
  sem_cmd->add_option("--utterances", sem.utterances, "utterance index TSV")->required();
  sem_cmd->add_option("--layers", sem.layers, "hidden-output archive per layer")
      ->required()
      ->delimiter(',');
  sem_cmd->add_option("--pooling", sem.poolings, "poolings to sweep")
      ->delimiter(',')
      ->check(CLI::IsMember({"mean", "max", "min"}))
      ->capture_default_str();
  sem_cmd->add_option("--subset", sem.subset, "synthetic or natural")
      ->check(CLI::IsMember({"synthetic", "natural"}))
      ->capture_default_str();
  sem.output.Attach(sem_cmd);

  SampleArgs sp;
  auto* sp_cmd = app.add_subcommand("sample-pairs", "balance pairs against control scores");
  sp_cmd->add_option("--candidates", sp.candidates, "word candidate set TSV");
  sp_cmd->add_option("--sentence-pool", sp.sentence_pool, "sentence pair pool TSV");
  sp_cmd->add_option("--target", sp.target, "pairs to keep from the sentence pool");
  sp_cmd->add_option("--seed", sp.seed, "sampler seed")->capture_default_str();
  sp_cmd->add_option("--restarts", sp.restarts, "independent passes, best kept")
      ->capture_default_str();
  sp_cmd->add_flag("--no-stratify", sp.no_stratify,
                   "sample all anchors/paradigms together");
  sp_cmd->add_option("--report", sp.report, "optional balance report");
  sp.output.Attach(sp_cmd, true, "selection TSV path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    const CLI::App* failed = &app;
    for (const auto* sub : app.get_subcommands()) failed = sub;
    err << failed->help();
    return 2;
  }

  try {
    if (abx_cmd->parsed()) {
      if (abx.features.empty() == abx.units.empty()) {
        err << "usage error: abx needs exactly one of --features or --units\n"
            << abx_cmd->help();
        return 2;
      }
      RunAbx(abx);
    } else if (km_cmd->parsed()) {
      RunKMeans(km);
    } else if (qz_cmd->parsed()) {
      RunQuantize(qz);
    } else if (ng_cmd->parsed()) {
      RunNgram(ng);
    } else if (lex_cmd->parsed()) {
      RunPairScore(lex, "lexical");
    } else if (syn_cmd->parsed()) {
      RunPairScore(syn, "syntactic");
    } else if (sem_cmd->parsed()) {
      RunSemantic(sem);
    } else if (sp_cmd->parsed()) {
      RunSample(sp);
    }
  } catch (const Error& e) {
    err << "error: " << ErrorKindName(e.kind()) << ": " << OneLine(e.what()) << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << OneLine(e.what()) << "\n";
    return 1;
  }
  return 0;
}

}  // namespace zrc
