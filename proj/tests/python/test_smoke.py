# Copyright 2026 The zrc-eval Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import itertools
import math

import numpy as np
import pytest

import zrc_eval as z


def test_frame_distances():
    assert z.angular_distance([1, 0], [0, 1]) == pytest.approx(math.pi / 2)
    assert z.angular_distance([2, 0], [-1, 0]) == pytest.approx(math.pi)
    assert z.kl_distance([0.5, 0.5], [0.25, 0.75]) == pytest.approx(0.14384, abs=1e-5)


def test_dtw_example():
    x = np.array([[1.0, 0.0]])
    y = np.array([[1.0, 0.0], [0.0, 1.0]])
    assert z.dtw_distance(x, y) == pytest.approx(math.pi / 4)
    assert z.dtw_distance(y, y) == 0.0
    with pytest.raises(z.ZrcError):
        z.dtw_distance(x, np.ones((2, 3)))


def test_abx_cell_degenerate():
    one_hot = lambda u: np.eye(3)[u]
    a = [one_hot([0, 0]) for _ in range(3)]
    b = [one_hot([2, 2]) for _ in range(3)]
    assert z.abx_cell(a, b) == 0.0
    same = [one_hot([1, 1]) for _ in range(3)]
    assert z.abx_cell(same, same) == 0.5
    assert z.abx_cell(a[:1], b[:1]) is None


def test_kmeans_and_quantize():
    fit = z.kmeans_fit(np.array([[0.0], [1.0], [10.0], [11.0]]), k=2, seed=3)
    assert sorted(fit["centroids"].ravel()) == [0.5, 10.5]
    assert fit["inertia"] == 1.0
    history = fit["inertia_history"]
    assert all(b <= a for a, b in zip(history, history[1:]))
    units = z.quantize(fit["centroids"], np.array([[0.2], [10.9]]))
    assert units[0] != units[1]


def test_ngram_normalized():
    model = z.NgramModel.train([[0, 1, 1], [1, 0], [2]], order=2, alpha=0.5)
    for context in ([z.START], [0], [1], [2]):
        total = sum(model.prob(context, u) for u in (0, 1, 2, z.END))
        assert total == pytest.approx(1.0, abs=1e-12)
    assert model.log_prob([0, 1]) < 0


def test_span_log_prob_binary_table():
    rng = np.random.default_rng(0)
    seqs = list(itertools.product([0, 1], repeat=4))
    weights = rng.uniform(0.1, 1.0, len(seqs))
    joint = {s: w / weights.sum() for s, w in zip(seqs, weights)}
    seq = (1, 0, 1, 1)
    # Span 1, stride 1: every window covers a token and its right neighbour.
    windows = z.span_windows(4, 1, 1)
    assert windows == [(1, 2), (2, 3), (3, 4), (4, 4)]
    expected = 0.0
    for first, last in windows:
        denom = sum(
            p for s, p in joint.items()
            if all(s[i] == seq[i] for i in range(4) if not first - 1 <= i <= last - 1))
        expected += math.log(joint[seq] / denom)
    got = z.span_log_prob([0, 1], joint, list(seq), span=1, stride=1)
    assert got == pytest.approx(expected, abs=1e-12)


def test_paired_accuracy_and_invariance():
    pairs = [("p1", "a1", "r1"), ("p2", "a2", "r2"), ("p3", "a3", "r3"), ("p4", "a4", "r4")]
    scores = {"a1": -1, "r1": -2, "a2": -3, "r2": -1, "a3": -2, "r3": -2, "a4": -0.5, "r4": -4}
    assert z.paired_accuracy(pairs, scores)["overall"] == 0.625
    assert z.paired_accuracy(pairs, scores, tie="zero")["overall"] == 0.5
    mapped = {k: math.exp(3 * v) for k, v in scores.items()}
    assert z.paired_accuracy(pairs, mapped)["overall"] == 0.625


def test_spearman():
    x = np.arange(10.0)
    assert z.spearman(x, x ** 3) == 1.0
    assert z.spearman(x, -x) == -1.0
    assert z.average_ranks([10, 20, 20, 5]) == [2, 3.5, 3.5, 1]
    with pytest.raises(z.ZrcError):
        z.spearman([1, 1, 1], [1, 2, 3])


def test_samplers():
    # Anchor score 0 against candidates that win (-1) or lose (+1).
    anchors = [[0.0]] * 4
    candidates = [[[-1.0], [1.0]]] * 4
    result = z.sample_word_pairs(anchors, candidates, seed=1, restarts=8)
    assert result["objective"] == 0.0
    assert len(result["chosen"]) == 4
    again = z.sample_word_pairs(anchors, candidates, seed=1, restarts=8, threads=2)
    assert again == result

    accepted = [[1.0], [0.0], [1.0], [0.0]]
    rejected = [[0.0], [1.0], [0.0], [1.0]]
    picked = z.sample_sentence_pairs(accepted, rejected, target=2, seed=3, restarts=4)
    assert picked["objective"] == 0.0
    assert len(picked["chosen"]) == 2


def test_cli_in_process(tmp_path):
    code, out, _ = z.run_cli(["--help"])
    assert code == 0 and "abx" in out
    code, _, err = z.run_cli(["abx", "--bogus"])
    assert code == 2 and err.startswith("usage error:")

    (tmp_path / "pairs.tsv").write_text(
        "pair_id\taccepted_id\trejected_id\np1\ta\tb\np2\tc\td\n")
    (tmp_path / "scores.tsv").write_text("a\t-1\nb\t-2\nc\t-5\nd\t-4\n")
    report = tmp_path / "r.json"
    code, _, err = z.run_cli(["score-lexical", "--pairs", str(tmp_path / "pairs.tsv"),
                              "--scores", str(tmp_path / "scores.tsv"), "--out", str(report)])
    assert code == 0, err
    parsed = z.read_report(report)
    assert parsed["aggregate"] == 0.5
    assert parsed["counts"]["pairs"] == 2
