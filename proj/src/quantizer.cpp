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

#include "zrc/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "binary_io.hpp"

namespace zrc {

namespace {

constexpr std::size_t kChunk = 1024;
constexpr char kCodebookMagic[4] = {'Z', 'R', 'C', 'K'};
constexpr std::uint32_t kCodebookVersion = 1;

double SquaredDistance(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

std::size_t Nearest(const Matrix& centroids, std::span<const double> frame, double* dist) {
  std::size_t best = 0;
  double best_d = SquaredDistance(centroids.row(0), frame);
  for (std::size_t k = 1; k < centroids.rows(); ++k) {
    const double d = SquaredDistance(centroids.row(k), frame);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  if (dist) *dist = best_d;
  return best;
}

struct ChunkStats {
  double inertia = 0.0;
  std::vector<double> sums;  // K x D
  std::vector<std::size_t> counts;
};

struct Assignment {
  std::vector<std::size_t> labels;
  std::vector<double> dist;  // squared distance to own centroid
  double inertia = 0.0;
  std::vector<double> sums;
  std::vector<std::size_t> counts;
};

Assignment Assign(const Matrix& frames, const Matrix& centroids, std::size_t threads) {
  const std::size_t n = frames.rows();
  const std::size_t k = centroids.rows();
  const std::size_t d = frames.cols();
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  Assignment out;
  out.labels.resize(n);
  out.dist.resize(n);
  std::vector<ChunkStats> stats(chunks);
  ParallelFor(chunks, threads, [&](std::size_t c) {
    ChunkStats& s = stats[c];
    s.sums.assign(k * d, 0.0);
    s.counts.assign(k, 0);
    const std::size_t end = std::min(n, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      const auto row = frames.row(i);
      const std::size_t label = Nearest(centroids, row, &out.dist[i]);
      out.labels[i] = label;
      s.inertia += out.dist[i];
      s.counts[label] += 1;
      for (std::size_t j = 0; j < d; ++j) s.sums[label * d + j] += row[j];
    }
  });
  out.sums.assign(k * d, 0.0);
  out.counts.assign(k, 0);
  for (const auto& s : stats) {
    out.inertia += s.inertia;
    for (std::size_t i = 0; i < k * d; ++i) out.sums[i] += s.sums[i];
    for (std::size_t i = 0; i < k; ++i) out.counts[i] += s.counts[i];
  }
  return out;
}

Matrix PlusPlusInit(const Matrix& frames, std::size_t k, Rng& rng, std::size_t threads) {
  const std::size_t n = frames.rows();
  Matrix centroids(0, frames.cols());
  centroids.AppendRow(frames.row(rng.Below(n)));
  std::vector<double> dist(n);
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  ParallelFor(chunks, threads, [&](std::size_t c) {
    for (std::size_t i = c * kChunk; i < std::min(n, (c + 1) * kChunk); ++i)
      dist[i] = SquaredDistance(frames.row(i), centroids.row(0));
  });
  while (centroids.rows() < k) {
    double total = 0.0;
    for (double v : dist) total += v;
    if (!(total > 0.0)) {
      throw Error(ErrorKind::kValidation, "k-means needs at least K=" + std::to_string(k) +
                                              " distinct frames, found " +
                                              std::to_string(centroids.rows()));
    }
    const double target = rng.Uniform() * total;
    std::size_t pick = n;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (dist[i] <= 0.0) continue;
      acc += dist[i];
      pick = i;
      if (acc > target) break;
    }
    centroids.AppendRow(frames.row(pick));
    const auto newest = centroids.row(centroids.rows() - 1);
    ParallelFor(chunks, threads, [&](std::size_t c) {
      for (std::size_t i = c * kChunk; i < std::min(n, (c + 1) * kChunk); ++i)
        dist[i] = std::min(dist[i], SquaredDistance(frames.row(i), newest));
    });
  }
  return centroids;
}

Matrix UpdateCentroids(const Matrix& frames, const Assignment& a, std::size_t k) {
  const std::size_t d = frames.cols();
  Matrix centroids(k, d);
  std::vector<double> dist = a.dist;
  for (std::size_t c = 0; c < k; ++c) {
    if (a.counts[c] == 0) continue;
    for (std::size_t j = 0; j < d; ++j)
      centroids(c, j) = a.sums[c * d + j] / static_cast<double>(a.counts[c]);
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (a.counts[c] != 0) continue;
    auto far = std::max_element(dist.begin(), dist.end());
    const auto idx = static_cast<std::size_t>(far - dist.begin());
    auto src = frames.row(idx);
    std::copy(src.begin(), src.end(), centroids.row(c).begin());
    dist[idx] = -1.0;
  }
  return centroids;
}

void CheckFinite(const Matrix& frames) {
  for (double v : frames.data()) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kNonFinite, "k-means input is not finite");
  }
}

}  // namespace

Codebook KMeansFit(const Matrix& frames, const KMeansOptions& options) {
  if (options.k < 1) throw Error(ErrorKind::kValidation, "K must be at least 1");
  const auto k = static_cast<std::size_t>(options.k);
  if (frames.rows() < k) {
    throw Error(ErrorKind::kValidation, "k-means needs N >= K (N=" +
                                            std::to_string(frames.rows()) +
                                            ", K=" + std::to_string(k) + ")");
  }
  if (frames.cols() == 0) throw Error(ErrorKind::kValidation, "k-means frames have no columns");
  CheckFinite(frames);
  const std::size_t threads = ResolveThreads(options.threads);

  Rng rng(options.seed);
  Codebook cb;
  cb.frame_rate = options.frame_rate;
  cb.seed = options.seed;
  cb.centroids = PlusPlusInit(frames, k, rng, threads);
  Assignment current = Assign(frames, cb.centroids, threads);
  cb.inertia_history.push_back(current.inertia);

  for (std::int32_t it = 1; it <= options.max_iter; ++it) {
    Matrix next = UpdateCentroids(frames, current, k);
    Assignment assigned = Assign(frames, next, threads);
    const double previous = current.inertia;
    if (assigned.inertia > previous * (1.0 + 1e-12)) {
      throw std::logic_error("k-means inertia increased from " + std::to_string(previous) +
                             " to " + std::to_string(assigned.inertia));
    }
    cb.centroids = std::move(next);
    current = std::move(assigned);
    cb.inertia_history.push_back(current.inertia);
    cb.iterations = it;
    if (current.inertia == 0.0 || previous - current.inertia <= options.tol * previous) break;
  }
  cb.inertia = current.inertia;
  return cb;
}

UnitSequence Quantize(const Codebook& codebook, const FeatureSequence& seq) {
  if (seq.dim() != codebook.dim()) {
    throw Error(ErrorKind::kDimensionMismatch,
                seq.utt_id + ": feature dim " + std::to_string(seq.dim()) +
                    " != codebook dim " + std::to_string(codebook.dim()));
  }
  if (codebook.size() == 0) throw Error(ErrorKind::kValidation, "empty codebook");
  UnitSequence out;
  out.utt_id = seq.utt_id;
  out.units.reserve(seq.length());
  for (std::size_t t = 0; t < seq.length(); ++t) {
    out.units.push_back(
        static_cast<std::int32_t>(Nearest(codebook.centroids, seq.frames.row(t), nullptr)));
  }
  return out;
}

Matrix ReservoirSubsample(const Matrix& frames, std::size_t max_frames, std::uint64_t seed) {
  if (frames.rows() <= max_frames) return frames;
  Rng rng(seed);
  std::vector<std::size_t> reservoir(max_frames);
  for (std::size_t i = 0; i < max_frames; ++i) reservoir[i] = i;
  for (std::size_t i = max_frames; i < frames.rows(); ++i) {
    const std::size_t j = rng.Below(i + 1);
    if (j < max_frames) reservoir[j] = i;
  }
  std::sort(reservoir.begin(), reservoir.end());
  Matrix out(0, frames.cols());
  for (auto i : reservoir) out.AppendRow(frames.row(i));
  return out;
}

void WriteCodebook(const Codebook& cb, const std::filesystem::path& path) {
  std::string out(kCodebookMagic, 4);
  internal::PutLe(out, kCodebookVersion);
  internal::PutLe(out, static_cast<std::uint32_t>(cb.size()));
  internal::PutLe(out, static_cast<std::uint32_t>(cb.dim()));
  internal::PutLe(out, static_cast<float>(cb.frame_rate));
  for (double v : cb.centroids.data()) internal::PutLe(out, static_cast<float>(v));
  internal::PutLe(out, cb.seed);
  WriteTextFile(path, out);
}

Codebook ReadCodebook(const std::filesystem::path& path) {
  const std::string data = ReadTextFile(path);
  if (data.size() < 4 || std::memcmp(data.data(), kCodebookMagic, 4) != 0) {
    throw Error(ErrorKind::kMagicMismatch, path.string() + ": missing ZRCK magic");
  }
  constexpr std::size_t header = 4 + 4 + 4 + 4 + 4;
  if (data.size() < header) throw Error(ErrorKind::kTruncated, path.string() + ": short header");
  const auto version = internal::GetLe<std::uint32_t>(data, 4);
  if (version != kCodebookVersion) {
    throw Error(ErrorKind::kFormat, path.string() + ": unsupported version " +
                                        std::to_string(version));
  }
  const auto k = internal::GetLe<std::uint32_t>(data, 8);
  const auto d = internal::GetLe<std::uint32_t>(data, 12);
  const auto rate = internal::GetLe<float>(data, 16);
  const std::uint64_t count = static_cast<std::uint64_t>(k) * d;
  if (data.size() != header + 4 * count + 8) {
    throw Error(data.size() < header + 4 * count + 8 ? ErrorKind::kTruncated
                                                     : ErrorKind::kDimensionMismatch,
                path.string() + ": size does not match K=" + std::to_string(k) +
                    ", D=" + std::to_string(d));
  }
  std::vector<double> values(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    values[i] = internal::GetLe<float>(data, header + 4 * i);
    if (!std::isfinite(values[i])) {
      throw Error(ErrorKind::kNonFinite, path.string() + ": non-finite centroid");
    }
  }
  Codebook cb;
  cb.centroids = Matrix(k, d, std::move(values));
  cb.frame_rate = rate;
  cb.seed = internal::GetLe<std::uint64_t>(data, header + 4 * count);
  return cb;
}

}  // namespace zrc
