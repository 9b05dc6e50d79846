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

#ifndef ZRC_DISTANCE_HPP_
#define ZRC_DISTANCE_HPP_

#include <span>
#include <string>
#include <string_view>

#include "zrc/common.hpp"
#include "zrc/io_formats.hpp"

namespace zrc {

enum class FrameMetric { kAngular, kKl };

std::string_view FrameMetricName(FrameMetric metric);
FrameMetric ParseFrameMetric(std::string_view name);

/// Floor applied to probabilities before taking logs in the KL distance.
inline constexpr double kKlFloor = 1e-10;

/// arccos of the normalized dot product, in radians. Throws kDomain on a
/// zero-norm input, kDimensionMismatch on unequal lengths.
double AngularFrameDistance(std::span<const double> x, std::span<const double> y);

/// sum_i p_i ln(p_i / q_i) with both sides floored at kKlFloor. Inputs must be
/// probability vectors (non-negative, summing to 1 within 1e-6).
double KlFrameDistance(std::span<const double> p, std::span<const double> q);

/// DTW distance averaged along the optimal path.
///
/// The path runs from (0, 0) to (T-1, S-1) using steps (1,0), (0,1), (1,1)
/// and minimizes the summed framewise distance. The returned value is that
/// sum divided by the number of aligned pairs on the path. Among equal-cost
/// predecessors the diagonal wins, then the step advancing only `x`, then the
/// step advancing only `y`.
double DtwDistance(const Matrix& x, const Matrix& y, FrameMetric metric);
double DtwDistance(const FeatureSequence& x, const FeatureSequence& y, FrameMetric metric);

}  // namespace zrc

#endif  // ZRC_DISTANCE_HPP_
