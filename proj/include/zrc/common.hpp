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

// Shared building blocks: the error type, a dense row-major matrix,
// warning sink, portable seeded RNG helpers and a small parallel-for.

#ifndef ZRC_COMMON_HPP_
#define ZRC_COMMON_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace zrc {

enum class ErrorKind {
  kFormat,             // structural problem in a file such as a bad header
  kParse,              // a field could not be parsed as the expected type
  kValidation,         // parsed fine but violates a data invariant
  kDomain,             // numerical precondition violated (zero norm, ...)
  kTruncated,          // body shorter than the header announced
  kDimensionMismatch,  // matrix/vector shapes disagree
  kNonFinite,          // NaN or infinity where finite values are required
  kMagicMismatch,      // binary file with the wrong magic bytes
  kNotFound,           // missing file, utterance, score or table entry
  kIo,                 // the OS refused a read or write
  kNoCells,            // ABX evaluation found nothing to score
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Dense row-major matrix of doubles. Rows are frames, columns dimensions.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  static Matrix FromRows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  /// Copy of rows [begin, end).
  Matrix RowRange(std::size_t begin, std::size_t end) const;
  void AppendRow(std::span<const double> values);

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Warnings such as skipped ABX cells go through a replaceable sink so tests
// and the CLI can decide what to do with them.
using WarningSink = std::function<void(std::string_view)>;
void SetWarningSink(WarningSink sink);
void Warn(std::string_view message);

/// SplitMix64-seeded xoshiro256** generator. Unlike the standard
/// distributions, draws are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t Next();
  /// Uniform in [0, 1) with 53 random bits.
  double Uniform();
  /// Uniform integer in [0, n). n must be positive.
  std::size_t Below(std::size_t n);
  template <class T>
  void Shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = Below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_[4];
};

/// Number of worker threads from an explicit request, the ZRC_EVAL_THREADS
/// environment variable, or 1.
std::size_t ResolveThreads(std::size_t requested);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Exceptions are
/// rethrown on the caller (the one from the lowest index wins).
void ParallelFor(std::size_t n, std::size_t threads,
                 const std::function<void(std::size_t)>& body);

// Locale-independent number parsing. Throw kParse with `context` in the message.
double ParseDouble(std::string_view text, std::string_view context);
std::int64_t ParseInt(std::string_view text, std::string_view context);

/// Fixed six-decimal rendering used by every report writer.
std::string FormatFixed6(double value);

std::vector<std::string_view> SplitWhitespace(std::string_view line);
std::vector<std::string_view> SplitChar(std::string_view line, char sep);

}  // namespace zrc

#endif  // ZRC_COMMON_HPP_
