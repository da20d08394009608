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

// Independent reference computations and fixtures shared by the unit and
// acceptance tests. Nothing here calls into the code under test except to
// build ledgers.

#include "tanglefl/ledger.hpp"
#include "tanglefl/random.hpp"

#include <algorithm>
#include <cstring>
#include <cstdint>
#include <random>
#include <set>
#include <type_traits>
#include <vector>

namespace tanglefl::testing {

inline TipMetadata random_metadata(Rng &rng, double timestamp)
{
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  TipMetadata                            md;
  md.client_id = rng() % 16;
  md.signature.entries.resize(rng() % 9);
  for (auto &v : md.signature.entries)
  {
    v = unit(rng);
  }
  md.model_accuracy     = unit(rng);
  md.current_epoch      = rng() % 50;
  md.validation_node_id = md.client_id;
  md.timestamp          = timestamp;
  return md;
}

/// Ledger of `size` nodes; parents drawn uniformly from all earlier nodes
/// (tips with probability `tip_bias`).
inline Ledger random_ledger(std::size_t size, std::uint64_t seed, double tip_bias = 0.5)
{
  Rng                                    rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Ledger                                 ledger(random_metadata(rng, 0.0));
  double                                 t = 0.0;
  while (ledger.size() < size)
  {
    auto pick = [&] {
      if (unit(rng) < tip_bias)
      {
        auto const tips = ledger.tips();
        return tips[rng() % tips.size()];
      }
      return NodeId{rng() % ledger.size()};
    };
    NodeId const a = pick();
    NodeId const b = pick();
    t += unit(rng);
    ledger.append(a, b, random_metadata(rng, t));
  }
  return ledger;
}

/// Nodes that nobody lists as a parent.
inline std::set<NodeId> brute_force_tips(Ledger const &ledger)
{
  std::set<NodeId> referenced;
  for (auto const &n : ledger.nodes())
  {
    referenced.insert(n.parents.begin(), n.parents.end());
  }
  std::set<NodeId> tips;
  for (auto const &n : ledger.nodes())
  {
    if (!referenced.contains(n.id))
    {
      tips.insert(n.id);
    }
  }
  return tips;
}

/// Fixpoint closure: x reaches `start` if x == start or a parent of x does.
inline std::vector<bool> brute_force_reaches(Ledger const &ledger, NodeId start)
{
  std::vector<bool> reach(ledger.size(), false);
  reach[start.value] = true;
  bool changed       = true;
  while (changed)
  {
    changed = false;
    for (auto const &n : ledger.nodes())
    {
      if (reach[n.id.value])
      {
        continue;
      }
      for (auto p : n.parents)
      {
        if (reach[p.value])
        {
          reach[n.id.value] = true;
          changed           = true;
          break;
        }
      }
    }
  }
  return reach;
}

struct BrutePartition
{
  std::vector<NodeId> reachable;
  std::vector<NodeId> unreachable;
};

inline BrutePartition brute_force_partition(Ledger const &ledger, NodeId start)
{
  auto const     reach = brute_force_reaches(ledger, start);
  BrutePartition out;
  for (auto id : brute_force_tips(ledger))
  {
    (reach[id.value] ? out.reachable : out.unreachable).push_back(id);
  }
  return out;
}

/// Plain two-loop coordinate mean.
inline std::vector<double> mean_oracle(std::vector<std::vector<double>> const &rows)
{
  std::vector<double> out(rows.front().size(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i)
  {
    long double s = 0.0L;
    for (auto const &r : rows)
    {
      s += r[i];
    }
    out[i] = static_cast<double>(s / static_cast<long double>(rows.size()));
  }
  return out;
}

template <typename T>
void flip_byte(T &value, std::size_t byte, std::uint8_t mask)
{
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  raw[byte % sizeof(T)] ^= mask;
  std::memcpy(&value, raw, sizeof(T));
}

/**
 * XORs one byte of one record with a non-zero mask. Targets are the hashed
 * metadata fields, the recorded parent digests and the first-parent id.
 * Returns the index of the mutated record.
 */
inline std::size_t mutate_path_byte(VerificationPath &path, Rng &rng)
{
  std::size_t const index       = rng() % path.size();
  PathRecord       &r           = path[index];
  auto const        mask        = static_cast<std::uint8_t>(1 + rng() % 255);
  std::size_t const byte        = rng() % 32;
  bool const        has_parents = !r.parents.empty();

  for (;;)
  {
    switch (rng() % 10)
    {
    case 0:
      flip_byte(r.metadata.client_id, byte, mask);
      return index;
    case 1:
      if (r.metadata.signature.entries.empty())
      {
        continue;
      }
      flip_byte(r.metadata.signature.entries[rng() % r.metadata.signature.entries.size()], byte, mask);
      return index;
    case 2:
      flip_byte(r.metadata.model_accuracy, byte, mask);
      return index;
    case 3:
      flip_byte(r.metadata.current_epoch, byte, mask);
      return index;
    case 4:
      flip_byte(r.metadata.validation_node_id, byte, mask);
      return index;
    case 5:
      flip_byte(r.metadata.timestamp, byte, mask);
      return index;
    case 6:
      r.parent_digests[0][byte] ^= mask;
      return index;
    case 7:
      r.parent_digests[1][byte] ^= mask;
      return index;
    case 8:
      if (!has_parents)
      {
        continue;
      }
      flip_byte(r.parents[0].value, byte, mask);
      return index;
    case 9:
      r.digest[byte] ^= mask;
      return index;
    }
  }
}

}  // namespace tanglefl::testing
