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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tanglefl {

enum class PartitionMode
{
  iid,
  dirichlet
};

struct PartitionSpec
{
  PartitionMode mode{PartitionMode::iid};
  double        beta{0.1};
  std::size_t   client_count{10};
  std::uint64_t seed{0};
  /// Dirichlet draws are repeated until every client holds at least this many rows.
  std::size_t   min_client_size{10};

  void validate() const;
};

/// "iid" or "dirichlet:<beta>".
PartitionSpec parse_partition(std::string const &text);
std::string   format_partition(PartitionSpec const &spec);

/// Class proportions over clients: shares[c][k] is the fraction of class c given to client k.
using ClassShares = std::vector<std::vector<double>>;

ClassShares dirichlet_shares(std::size_t classes, std::size_t clients, double beta,
                             std::uint64_t seed);

/**
 * Splits `data` into `spec.client_count` disjoint client datasets whose union is `data`.
 *
 * IID: shuffled, sizes differ by at most one. Dirichlet: per class, the class
 * rows are shuffled and cut according to a Dirichlet(beta) draw over clients.
 */
std::vector<Dataset> partition(Dataset const &data, PartitionSpec const &spec);

/// Shannon entropy (nats) of a client's label distribution.
double label_entropy(Dataset const &data);

}  // namespace tanglefl
