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

#include "tanglefl/signature.hpp"

#include "tanglefl/training.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tanglefl {

double sample_signature(std::span<double const> feature_map)
{
  if (feature_map.empty())
  {
    throw std::invalid_argument("sample_signature: empty feature map");
  }
  std::size_t zeros = 0;
  for (double v : feature_map)
  {
    zeros += std::abs(v) <= kZeroActivationTolerance ? 1 : 0;
  }
  return static_cast<double>(zeros) / static_cast<double>(feature_map.size());
}

FeatureSignature dataset_signature(ModelParams const &model, Dataset const &data,
                                   std::size_t groups)
{
  if (data.empty())
  {
    throw std::invalid_argument("dataset_signature: empty dataset");
  }
  std::size_t const hidden = model.shape().hidden;
  if (groups == 0 || hidden % groups != 0)
  {
    throw std::invalid_argument("dataset_signature: hidden width " + std::to_string(hidden) +
                                " is not divisible into " + std::to_string(groups) + " groups");
  }
  if (data.feature_count != model.shape().inputs)
  {
    throw std::invalid_argument("dataset_signature: model input width does not match dataset");
  }

  std::size_t const   block = hidden / groups;
  std::vector<double> activations(hidden);
  FeatureSignature    sig;
  sig.entries.assign(groups, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i)
  {
    hidden_activations(model, data.row(i), activations);
    for (std::size_t g = 0; g < groups; ++g)
    {
      sig.entries[g] += sample_signature(std::span<double const>(activations).subspan(g * block, block));
    }
  }
  for (auto &v : sig.entries)
  {
    v /= static_cast<double>(data.size());
  }
  return sig;
}

double cosine_similarity(FeatureSignature const &a, FeatureSignature const &b)
{
  if (a.size() != b.size())
  {
    throw std::invalid_argument("cosine_similarity: signature lengths differ");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    dot += a.entries[i] * b.entries[i];
    na += a.entries[i] * a.entries[i];
    nb += b.entries[i] * b.entries[i];
  }
  if (na == 0.0 || nb == 0.0)
  {
    return 0.0;
  }
  double const c = dot / std::sqrt(na * nb);
  // rounding can push identical vectors a hair past 1
  return std::min(1.0, std::max(0.0, c));
}

void SimilarityRegistry::record(std::uint64_t round, std::uint64_t client_a, std::uint64_t client_b,
                                double value)
{
  if (!(value >= 0.0 && value <= 1.0))
  {
    throw std::invalid_argument("similarity value outside [0,1]");
  }
  if (client_a == client_b && value != 1.0)
  {
    throw std::invalid_argument("self-similarity must be 1");
  }
  Pair const key = client_a <= client_b ? Pair{client_a, client_b} : Pair{client_b, client_a};
  values_[key][round] = value;
}

std::optional<double> SimilarityRegistry::query(std::uint64_t round, std::uint64_t client_a,
                                                std::uint64_t client_b) const
{
  Pair const key = client_a <= client_b ? Pair{client_a, client_b} : Pair{client_b, client_a};
  auto const it  = values_.find(key);
  if (it == values_.end())
  {
    return std::nullopt;
  }
  auto const &history = it->second;
  auto        at      = history.upper_bound(round);
  if (at == history.begin())
  {
    return std::nullopt;
  }
  return std::prev(at)->second;
}

std::size_t SimilarityRegistry::size() const noexcept
{
  std::size_t n = 0;
  for (auto const &[pair, history] : values_)
  {
    n += history.size();
  }
  return n;
}

void SimilarityRegistry::write_csv(std::ostream &out) const
{
  std::map<std::uint64_t, std::vector<std::pair<Pair, double>>> by_round;
  for (auto const &[pair, history] : values_)
  {
    for (auto const &[round, value] : history)
    {
      by_round[round].emplace_back(pair, value);
    }
  }
  out << "round,i,j,value\n";
  char buf[32];
  for (auto const &[round, rows] : by_round)
  {
    for (auto const &[pair, value] : rows)
    {
      auto const end = std::to_chars(buf, buf + sizeof(buf), value).ptr;
      out << round << ',' << pair.first << ',' << pair.second << ',' << std::string_view(buf, end) << '\n';
    }
  }
}

}  // namespace tanglefl
