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

#include <cstdint>
#include <initializer_list>
#include <random>

namespace tanglefl {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to spread a run seed into independent streams.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives a stream seed from a base seed and a tag path, e.g.
/// derive_seed(seed, {kStreamTrain, client, epoch}).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) noexcept
{
  std::uint64_t s = mix64(base);
  for (auto t : tags)
  {
    s = mix64(s ^ mix64(t + 0x632be59bd9b4e019ULL));
  }
  return s;
}

// stream tags
inline constexpr std::uint64_t kStreamData      = 1;
inline constexpr std::uint64_t kStreamSplit     = 2;
inline constexpr std::uint64_t kStreamPartition = 3;
inline constexpr std::uint64_t kStreamInit      = 4;
inline constexpr std::uint64_t kStreamTrain     = 5;
inline constexpr std::uint64_t kStreamSpeed     = 6;
inline constexpr std::uint64_t kStreamSelection = 7;

}  // namespace tanglefl
