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

#ifndef ZRC_QUANTIZER_HPP_
#define ZRC_QUANTIZER_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "zrc/common.hpp"
#include "zrc/io_formats.hpp"

namespace zrc {

inline constexpr std::int32_t kDefaultCodebookSize = 50;

struct Codebook {
  Matrix centroids;  // K x D
  double frame_rate = 100.0;
  std::uint64_t seed = 0;
  std::int32_t iterations = 0;
  double inertia = 0.0;
  /// Inertia measured at each assignment step, first to last.
  std::vector<double> inertia_history;

  std::int32_t size() const { return static_cast<std::int32_t>(centroids.rows()); }
  std::size_t dim() const { return centroids.cols(); }
};

struct KMeansOptions {
  std::int32_t k = kDefaultCodebookSize;
  std::uint64_t seed = 0;
  std::int32_t max_iter = 100;
  double tol = 1e-4;  // relative inertia improvement below which Lloyd stops
  double frame_rate = 100.0;
  std::size_t threads = 1;
};

/// Lloyd's algorithm with k-means++ seeding. Frames are processed in fixed
/// chunks whose partial sums are combined in chunk order, so the result does
/// not depend on the thread count. An empty cluster takes over the frame
/// lying farthest from its assigned centroid.
Codebook KMeansFit(const Matrix& frames, const KMeansOptions& options);

/// Nearest centroid per frame (squared Euclidean), lowest index on ties.
UnitSequence Quantize(const Codebook& codebook, const FeatureSequence& seq);

/// Uniform reservoir sample of at most `max_frames` rows, original order kept.
Matrix ReservoirSubsample(const Matrix& frames, std::size_t max_frames, std::uint64_t seed);

/// Binary "ZRCK" file: u32 version, u32 K, u32 D, f32 rate, K*D f32, u64 seed.
void WriteCodebook(const Codebook& codebook, const std::filesystem::path& path);
Codebook ReadCodebook(const std::filesystem::path& path);

}  // namespace zrc

#endif  // ZRC_QUANTIZER_HPP_
