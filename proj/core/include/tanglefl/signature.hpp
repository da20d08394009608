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

#include "tanglefl/dataset.hpp"
#include "tanglefl/model.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace tanglefl {

/// Activations with |v| at or below this count as zero.
inline constexpr double kZeroActivationTolerance = 1e-12;

/// Per-group fraction of zero activations, each entry in [0,1].
struct FeatureSignature
{
  std::vector<double> entries;

  std::size_t size() const noexcept { return entries.size(); }
  bool        operator==(FeatureSignature const &) const = default;
};

/// Fraction of zero entries in a feature map. Throws std::invalid_argument when empty.
double sample_signature(std::span<double const> feature_map);

/**
 * Mean zero-activation fraction over the dataset for each of `groups`
 * contiguous blocks of the hidden layer. The hidden width must be divisible
 * by `groups`.
 */
FeatureSignature dataset_signature(ModelParams const &model, Dataset const &data,
                                   std::size_t groups);

/// Cosine of the angle between two signatures; 0 when either has zero norm.
double cosine_similarity(FeatureSignature const &a, FeatureSignature const &b);

/**
 * Round-indexed pairwise similarity store (the on-ledger contract analog).
 *
 * Pairs are unordered. A query returns the value from the most recent round
 * not after the requested one.
 */
class SimilarityRegistry
{
public:
  void record(std::uint64_t round, std::uint64_t client_a, std::uint64_t client_b, double value);

  /// std::nullopt signals an unknown pair.
  std::optional<double> query(std::uint64_t round, std::uint64_t client_a,
                              std::uint64_t client_b) const;

  std::size_t size() const noexcept;

  /// CSV rows "round,i,j,value" (i <= j), ordered by round then pair.
  void write_csv(std::ostream &out) const;

private:
  using Pair = std::pair<std::uint64_t, std::uint64_t>;

  std::map<Pair, std::map<std::uint64_t, double>> values_;
};

}  // namespace tanglefl
