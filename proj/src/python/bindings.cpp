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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "zrc/abx.hpp"
#include "zrc/cli.hpp"
#include "zrc/common.hpp"
#include "zrc/distance.hpp"
#include "zrc/io_formats.hpp"
#include "zrc/metrics.hpp"
#include "zrc/quantizer.hpp"
#include "zrc/sampler.hpp"
#include "zrc/scoring.hpp"

namespace py = pybind11;

namespace zrc {
namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix ToMatrix(const Array& a) {
  if (a.ndim() == 1) {
    return Matrix(1, static_cast<std::size_t>(a.shape(0)),
                  std::vector<double>(a.data(), a.data() + a.size()));
  }
  if (a.ndim() != 2) throw Error(ErrorKind::kDimensionMismatch, "expected a 1-D or 2-D array");
  return Matrix(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)),
                std::vector<double>(a.data(), a.data() + a.size()));
}

Array ToArray(const Matrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

std::vector<double> ToVector(const Array& a) { return std::vector<double>(a.data(), a.data() + a.size()); }

py::dict ReportDict(const MetricReport& r) {
  py::dict d;
  d["metric"] = r.metric;
  d["aggregate"] = r.aggregate;
  d["subsets"] = r.subsets;
  d["counts"] = r.counts;
  d["config"] = r.config;
  return d;
}

std::vector<ScoredPair> ToPairs(const std::vector<py::tuple>& rows) {
  std::vector<ScoredPair> pairs;
  for (const auto& row : rows) {
    ScoredPair p{row[0].cast<std::string>(), row[1].cast<std::string>(),
                 row[2].cast<std::string>(), {}};
    if (row.size() > 3) p.tags = row[3].cast<std::map<std::string, std::string>>();
    pairs.push_back(std::move(p));
  }
  return pairs;
}

py::dict AssignmentDict(const Assignment& a) {
  py::dict d;
  d["chosen"] = a.chosen;
  d["objective"] = a.objective;
  d["stratum_objective"] = a.stratum_objective;
  d["restart"] = a.restart;
  return d;
}

}  // namespace
}  // namespace zrc

PYBIND11_MODULE(zrc_eval, m) {
  using namespace zrc;
  m.doc() = "Zero-resource spoken language model evaluation";

  py::register_exception<Error>(m, "ZrcError", PyExc_ValueError);

  // distance
  m.def(
      "angular_distance",
      [](const Array& x, const Array& y) { return AngularFrameDistance(ToVector(x), ToVector(y)); },
      py::arg("x"), py::arg("y"), "Angle in radians between two frames.");
  m.def(
      "kl_distance",
      [](const Array& p, const Array& q) { return KlFrameDistance(ToVector(p), ToVector(q)); },
      py::arg("p"), py::arg("q"), "KL divergence between two probability frames.");
  m.def(
      "dtw_distance",
      [](const Array& x, const Array& y, const std::string& metric) {
        return DtwDistance(ToMatrix(x), ToMatrix(y), ParseFrameMetric(metric));
      },
      py::arg("x"), py::arg("y"), py::arg("metric") = "angular",
      "Path-averaged DTW distance between two T x D frame sequences.");

  // abx
  m.def(
      "abx_cell",
      [](const std::vector<Array>& a, const std::vector<Array>& b, const std::string& metric)
          -> std::optional<double> {
        AbxCategory ca, cb;
        for (const auto& t : a) ca.tokens.push_back(ToMatrix(t));
        for (const auto& t : b) cb.tokens.push_back(ToMatrix(t));
        return SymmetrizedCell(ca, cb, ParseFrameMetric(metric));
      },
      py::arg("a"), py::arg("b"), py::arg("metric") = "angular",
      "Symmetrized ABX error of two token categories, None when undefined.");
  m.def(
      "abx_evaluate",
      [](const std::filesystem::path& items, const std::filesystem::path& features,
         const std::string& mode, const std::string& metric, std::size_t threads) {
        const auto tokens = ReadItemFile(items);
        const FeatureArchive archive(features);
        const auto result =
            AbxEvaluate(tokens, archive, ParseAbxMode(mode), ParseFrameMetric(metric), threads);
        return ReportDict(AbxReport(result, ParseFrameMetric(metric)));
      },
      py::arg("items"), py::arg("features"), py::arg("mode") = "within",
      py::arg("metric") = "angular", py::arg("threads") = 1,
      "ABX error rate over an item file and a feature directory.");

  // quantizer
  m.def(
      "kmeans_fit",
      [](const Array& frames, std::int32_t k, std::uint64_t seed, std::int32_t max_iter,
         double tol, std::size_t threads) {
        KMeansOptions opts;
        opts.k = k;
        opts.seed = seed;
        opts.max_iter = max_iter;
        opts.tol = tol;
        opts.threads = threads;
        const auto cb = KMeansFit(ToMatrix(frames), opts);
        py::dict d;
        d["centroids"] = ToArray(cb.centroids);
        d["inertia"] = cb.inertia;
        d["inertia_history"] = cb.inertia_history;
        d["iterations"] = cb.iterations;
        return d;
      },
      py::arg("frames"), py::arg("k") = kDefaultCodebookSize, py::arg("seed") = 0,
      py::arg("max_iter") = 100, py::arg("tol") = 1e-4, py::arg("threads") = 1);
  m.def(
      "quantize",
      [](const Array& centroids, const Array& frames) {
        Codebook cb;
        cb.centroids = ToMatrix(centroids);
        return Quantize(cb, FeatureSequence{"", 100.0, ToMatrix(frames)}).units;
      },
      py::arg("centroids"), py::arg("frames"), "Index of the nearest centroid per frame.");

  // scoring
  py::class_<NgramModel>(m, "NgramModel")
      .def_static(
          "train",
          [](const std::vector<std::vector<std::int32_t>>& corpus, std::int32_t order,
             double alpha) {
            std::vector<UnitSequence> seqs;
            for (std::size_t i = 0; i < corpus.size(); ++i)
              seqs.push_back({std::to_string(i), corpus[i]});
            return NgramModel::Train(seqs, order, alpha);
          },
          py::arg("corpus"), py::arg("order") = 2, py::arg("alpha") = 1.0)
      .def_static("load", &NgramModel::Load, py::arg("path"))
      .def("save", &NgramModel::Save, py::arg("path"))
      .def_property_readonly("order", &NgramModel::order)
      .def_property_readonly("alpha", &NgramModel::alpha)
      .def(
          "prob",
          [](const NgramModel& model, const std::vector<std::int32_t>& context,
             std::int32_t next) { return model.Prob(context, next); },
          py::arg("context"), py::arg("next"))
      .def(
          "log_prob",
          [](const NgramModel& model, const std::vector<std::int32_t>& units) {
            return ChainRuleLogProb(model, UnitSequence{"", units}).log_score;
          },
          py::arg("units"), "Chain-rule log-probability including the end symbol.");
  m.attr("START") = NgramModel::kStart;
  m.attr("END") = NgramModel::kEnd;

  m.def(
      "span_windows",
      [](std::size_t length, std::int32_t span, std::int32_t stride) {
        return SpanWindows(length, SpanConfig{span, stride});
      },
      py::arg("length"), py::arg("span") = 15, py::arg("stride") = 5);
  m.def(
      "span_log_prob",
      [](const std::vector<std::int32_t>& vocabulary,
         const std::map<std::vector<std::int32_t>, double>& joint,
         const std::vector<std::int32_t>& units, std::int32_t span, std::int32_t stride,
         bool per_token) {
        const JointTableScorer scorer(vocabulary, joint);
        return SpanPseudoProb(scorer, UnitSequence{"", units}, SpanConfig{span, stride},
                              per_token)
            .log_score;
      },
      py::arg("vocabulary"), py::arg("joint"), py::arg("units"), py::arg("span") = 15,
      py::arg("stride") = 5, py::arg("per_token") = false,
      "Span pseudo-log-probability under an explicit joint table.");

  // metrics
  m.def(
      "paired_accuracy",
      [](const std::vector<py::tuple>& pairs, const std::map<std::string, double>& scores,
         const std::string& tie) {
        const auto r = PairedAccuracy(ToPairs(pairs), scores, ParseTiePolicy(tie));
        py::dict d;
        d["overall"] = r.overall;
        d["pairs"] = r.pair_count;
        d["ties"] = r.tie_count;
        d["per_tag"] = r.per_tag;
        return d;
      },
      py::arg("pairs"), py::arg("scores"), py::arg("tie") = "half",
      "Pairs are (pair_id, accepted_id, rejected_id[, tags]).");
  m.def(
      "spearman",
      [](const Array& x, const Array& y) { return SpearmanRho(ToVector(x), ToVector(y)); },
      py::arg("x"), py::arg("y"));
  m.def(
      "average_ranks", [](const Array& x) { return AverageRanks(ToVector(x)); }, py::arg("x"));
  m.def(
      "cosine_similarity",
      [](const Array& x, const Array& y) { return CosineSimilarity(ToVector(x), ToVector(y)); },
      py::arg("x"), py::arg("y"));
  m.def(
      "pool",
      [](const Array& hidden, const std::string& pooling) {
        return Pool(ToMatrix(hidden), ParsePooling(pooling));
      },
      py::arg("hidden"), py::arg("pooling") = "mean");

  // sampler
  m.def(
      "sample_word_pairs",
      [](const std::vector<std::vector<double>>& anchor_scores,
         const std::vector<std::vector<std::vector<double>>>& candidate_scores,
         std::optional<std::vector<std::string>> strata, std::uint64_t seed,
         std::size_t restarts, std::size_t threads) {
        if (candidate_scores.size() != anchor_scores.size() ||
            (strata && strata->size() != anchor_scores.size())) {
          throw Error(ErrorKind::kDimensionMismatch, "one entry per anchor expected");
        }
        CandidateSet set;
        set.score_count = anchor_scores.empty() ? 0 : anchor_scores.front().size();
        for (std::size_t i = 0; i < anchor_scores.size(); ++i) {
          Anchor a{std::to_string(i), strata ? (*strata)[i] : "", anchor_scores[i], {}};
          for (std::size_t k = 0; k < candidate_scores[i].size(); ++k)
            a.candidates.push_back({std::to_string(k), candidate_scores[i][k]});
          set.anchors.push_back(std::move(a));
        }
        return AssignmentDict(
            SampleWordPairs(set, SamplerOptions{seed, restarts, threads, strata.has_value()}));
      },
      py::arg("anchor_scores"), py::arg("candidate_scores"), py::arg("strata") = py::none(),
      py::arg("seed") = 0, py::arg("restarts") = 1, py::arg("threads") = 1,
      "anchor_scores is N x M, candidate_scores N x K_i x M.");
  m.def(
      "sample_sentence_pairs",
      [](const std::vector<std::vector<double>>& accepted,
         const std::vector<std::vector<double>>& rejected,
         std::optional<std::vector<std::string>> paradigms, std::size_t target,
         std::uint64_t seed, std::size_t restarts) {
        if (rejected.size() != accepted.size() ||
            (paradigms && paradigms->size() != accepted.size())) {
          throw Error(ErrorKind::kDimensionMismatch, "one entry per pair expected");
        }
        std::vector<SentencePair> pool;
        for (std::size_t i = 0; i < accepted.size(); ++i)
          pool.push_back({std::to_string(i), paradigms ? (*paradigms)[i] : "", accepted[i],
                          rejected[i]});
        const auto sel = SampleSentencePairs(
            pool, target, SamplerOptions{seed, restarts, 1, paradigms.has_value()});
        py::dict d;
        d["chosen"] = sel.chosen;
        d["objective"] = sel.objective;
        d["restart"] = sel.restart;
        return d;
      },
      py::arg("accepted"), py::arg("rejected"), py::arg("paradigms") = py::none(),
      py::arg("target") = 0, py::arg("seed") = 0, py::arg("restarts") = 1);

  // reports and command line
  m.def(
      "read_report",
      [](const std::filesystem::path& path) {
        return ReportDict(ReadReport(path, ReportFormatForPath(path)));
      },
      py::arg("path"));
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = RunCli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs zrc-eval in-process; returns (exit_code, stdout, stderr).");
}
