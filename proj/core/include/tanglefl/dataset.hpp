//------------------------------------------------------------------------------
//
//   Copyright 2026 The tanglefl Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace tanglefl {

/**
 * Row-major feature matrix with integer labels.
 *
 * `origin` carries the source index of every row so partitions and splits can
 * be audited against the dataset they came from.
 */
struct Dataset
{
  std::size_t                feature_count{0};
  std::size_t                class_count{0};
  std::vector<double>        features;
  std::vector<std::uint32_t> labels;
  std::vector<std::size_t>   origin;

  std::size_t size() const noexcept { return labels.size(); }
  bool        empty() const noexcept { return labels.empty(); }

  std::span<double const> row(std::size_t i) const noexcept
  {
    return {features.data() + i * feature_count, feature_count};
  }

  /// Appends row `i` of `other` (same feature/class counts).
  void push_back_from(Dataset const &other, std::size_t i);

  Dataset subset(std::span<std::size_t const> rows) const;

  std::vector<std::size_t> class_histogram() const;

  /// Throws std::invalid_argument when shapes or labels are inconsistent.
  void validate() const;
};

Dataset concat(std::span<Dataset const> parts);

struct DataSplit
{
  Dataset train;
  Dataset validation;
  Dataset test;
};

/// Random 8:1:1 split. Validation and test each get max(1, round(n/10)) rows;
/// requires n >= 3.
DataSplit split_train_val_test(Dataset const &data, std::uint64_t seed);

enum class TaskKind
{
  toy_digits,
  synthetic
};

/// 8x8 noisy, jittered renderings of ten digit glyphs (d = 64, c = 10).
Dataset make_toy_digits(std::size_t samples, std::uint64_t seed);

/// Gaussian-mixture classification task with one component per class.
Dataset make_synthetic(std::size_t samples, std::size_t features, std::size_t classes,
                       std::uint64_t seed);

Dataset make_task(TaskKind task, std::size_t samples, std::uint64_t seed);

/// CSV: one row per sample, features then label.
void write_csv(std::ostream &out, Dataset const &data);
Dataset read_csv(std::istream &in, std::size_t class_count);

}  // namespace tanglefl
