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

#include "zrc/distance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace zrc {

std::string_view FrameMetricName(FrameMetric metric) {
  return metric == FrameMetric::kAngular ? "angular" : "kl";
}

FrameMetric ParseFrameMetric(std::string_view name) {
  if (name == "angular") return FrameMetric::kAngular;
  if (name == "kl") return FrameMetric::kKl;
  throw Error(ErrorKind::kValidation, "unknown distance '" + std::string(name) + "'");
}

namespace {

double Dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double AngularFromNorms(std::span<const double> x, std::span<const double> y, double nx,
                        double ny) {
  double c = Dot(x, y) / (nx * ny);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double KlUnchecked(std::span<const double> p, std::span<const double> q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = std::max(p[i], kKlFloor);
    const double qi = std::max(q[i], kKlFloor);
    s += pi * std::log(pi / qi);
  }
  return s;
}

void CheckProbability(std::span<const double> p) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::kDomain, "KL distance needs non-negative finite probabilities");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw Error(ErrorKind::kDomain, "KL distance needs rows summing to 1");
  }
}

double Norm(std::span<const double> x) {
  double n = std::sqrt(Dot(x, x));
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorKind::kDomain, "angular distance undefined for a zero-norm frame");
  }
  return n;
}

}  // namespace

double AngularFrameDistance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "angular distance on vectors of unequal size");
  }
  return AngularFromNorms(x, y, Norm(x), Norm(y));
}

double KlFrameDistance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "KL distance on vectors of unequal size");
  }
  CheckProbability(p);
  CheckProbability(q);
  // Floored rows no longer sum to one exactly; the clamp keeps the
  // result non-negative.
  return std::max(0.0, KlUnchecked(p, q));
}

double DtwDistance(const Matrix& x, const Matrix& y, FrameMetric metric) {
  if (x.rows() == 0 || y.rows() == 0) {
    throw Error(ErrorKind::kValidation, "DTW needs non-empty sequences");
  }
  if (x.cols() != y.cols()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "DTW on sequences of dimension " + std::to_string(x.cols()) + " and " +
                    std::to_string(y.cols()));
  }
  const std::size_t rows = x.rows();
  const std::size_t cols = y.rows();

  std::vector<double> x_norm(rows), y_norm(cols);
  if (metric == FrameMetric::kAngular) {
    for (std::size_t i = 0; i < rows; ++i) x_norm[i] = Norm(x.row(i));
    for (std::size_t j = 0; j < cols; ++j) y_norm[j] = Norm(y.row(j));
  } else {
    for (std::size_t i = 0; i < rows; ++i) CheckProbability(x.row(i));
    for (std::size_t j = 0; j < cols; ++j) CheckProbability(y.row(j));
  }
  auto frame = [&](std::size_t i, std::size_t j) {
    return metric == FrameMetric::kAngular
               ? AngularFromNorms(x.row(i), y.row(j), x_norm[i], y_norm[j])
               : std::max(0.0, KlUnchecked(x.row(i), y.row(j)));
  };

  // Rolling rows of accumulated cost and path length. Choosing the
  // predecessor per cell with a fixed preference is the same as
  // backtracking with that preference, so no full matrix is needed.
  std::vector<double> prev_cost(cols), cost(cols);
  std::vector<std::size_t> prev_len(cols), len(cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double d = frame(i, j);
      if (i == 0 && j == 0) {
        cost[j] = d;
        len[j] = 1;
        continue;
      }
      double best = 0.0;
      std::size_t best_len = 0;
      bool have = false;
      auto consider = [&](double c, std::size_t l) {
        if (!have || c < best) {
          best = c;
          best_len = l;
          have = true;
        }
      };
      if (i > 0 && j > 0) consider(prev_cost[j - 1], prev_len[j - 1]);  // diagonal
      if (i > 0) consider(prev_cost[j], prev_len[j]);                    // advance x
      if (j > 0) consider(cost[j - 1], len[j - 1]);                      // advance y
      cost[j] = best + d;
      len[j] = best_len + 1;
    }
    std::swap(cost, prev_cost);
    std::swap(len, prev_len);
  }
  return prev_cost[cols - 1] / static_cast<double>(prev_len[cols - 1]);
}

double DtwDistance(const FeatureSequence& x, const FeatureSequence& y, FrameMetric metric) {
  return DtwDistance(x.frames, y.frames, metric);
}

}  // namespace zrc
