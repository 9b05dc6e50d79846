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

// Machine ABX discriminability over minimal triphone pairs.
//
// For two categories A and B the asymmetric error is the fraction of
// (a, x, b) triplets, a != x both from A, where b is closer to x than a is,
// with ties counted as one half. Cells are symmetrized (A vs B and B vs A),
// then averaged over speakers within a context, over contexts within a
// phone pair and finally over phone pairs.

#ifndef ZRC_ABX_HPP_
#define ZRC_ABX_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zrc/distance.hpp"
#include "zrc/io_formats.hpp"

namespace zrc {

enum class AbxMode { kWithin, kAcross };

std::string_view AbxModeName(AbxMode mode);
AbxMode ParseAbxMode(std::string_view name);

struct AbxCategory {
  std::string left;
  std::string center;
  std::string right;
  std::string speaker;
  std::vector<Matrix> tokens;

  std::size_t size() const { return tokens.size(); }
};

using SequenceDistance = std::function<double(const Matrix&, const Matrix&)>;

/// Asymmetric ABX error from precomputed distances. `d_ax(i, k)` is the
/// distance from the i-th A token to the k-th X token and `d_bx(j, k)` from
/// the j-th B token. With `x_is_a` the X tokens are the A tokens themselves
/// and the a == x terms are skipped. Returns nullopt when the cell has no
/// triplet to score.
std::optional<double> AsymmetricAbxFromDistances(const Matrix& d_ax, const Matrix& d_bx,
                                                 bool x_is_a);

/// Within-category form: a and x both range over A. nullopt (with a warning)
/// when n_A < 2 or n_B < 1.
std::optional<double> AsymmetricAbx(const AbxCategory& a, const AbxCategory& b,
                                    const SequenceDistance& distance);
std::optional<double> AsymmetricAbx(const AbxCategory& a, const AbxCategory& b,
                                    FrameMetric metric);

/// Across form: a from `a`, b from `b`, x from `x` (same phone triple as `a`,
/// different speaker). nullopt when any of the sets is empty.
std::optional<double> AsymmetricAbxAcross(const AbxCategory& a, const AbxCategory& b,
                                          const AbxCategory& x,
                                          const SequenceDistance& distance);

/// Mean of both directions; nullopt if either direction is undefined.
std::optional<double> SymmetrizedCell(const AbxCategory& a, const AbxCategory& b,
                                      const SequenceDistance& distance);
std::optional<double> SymmetrizedCell(const AbxCategory& a, const AbxCategory& b,
                                      FrameMetric metric);

struct AbxResult {
  AbxMode mode = AbxMode::kWithin;
  double error_rate = 0.0;  // percent
  std::int64_t cell_count = 0;
  std::int64_t skipped_cells = 0;
  std::int64_t dropped_tokens = 0;
  std::map<std::string, double> per_phone_pair;  // "p1:p2" -> percent
};

/// A token with its frames already cut out of the utterance.
struct AbxToken {
  TriphoneToken item;
  Matrix frames;
};

/// Cuts every item out of the archive. Frames [floor(onset*rate),
/// floor(offset*rate)) are kept; items whose span is empty are dropped with a
/// warning and counted in `dropped`. Missing utterances throw kNotFound.
std::vector<AbxToken> ExtractTokens(const std::vector<TriphoneToken>& items,
                                    const FeatureArchive& archive, std::int64_t* dropped);

std::vector<AbxToken> ExtractTokensFromUnits(const std::vector<TriphoneToken>& items,
                                             const std::vector<UnitSequence>& units,
                                             std::int32_t codebook_size, double frame_rate,
                                             std::int64_t* dropped);

AbxResult AbxEvaluate(const std::vector<AbxToken>& tokens, AbxMode mode, FrameMetric metric,
                      std::size_t threads = 1);
AbxResult AbxEvaluate(const std::vector<TriphoneToken>& items, const FeatureArchive& archive,
                      AbxMode mode, FrameMetric metric, std::size_t threads = 1);

/// One row per unit, a 1 at the unit index. Throws kValidation if a unit is
/// out of [0, K).
FeatureSequence OneHotEncode(const UnitSequence& seq, std::int32_t codebook_size,
                             double frame_rate = 100.0);

MetricReport AbxReport(const AbxResult& result, FrameMetric metric);

}  // namespace zrc

#endif  // ZRC_ABX_HPP_
