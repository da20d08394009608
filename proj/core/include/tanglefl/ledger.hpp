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

#include "tanglefl/digest.hpp"
#include "tanglefl/signature.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

namespace tanglefl {

/// Sequence number of a ledger entry; genesis is 0.
struct NodeId
{
  std::uint64_t value{0};

  auto operator<=>(NodeId const &) const = default;
};

inline constexpr NodeId kGenesis{0};

/// client_id / validation_node_id used by the task publisher.
inline constexpr std::uint64_t kPublisherId = ~std::uint64_t{0};

struct TipMetadata
{
  std::uint64_t    client_id{0};
  FeatureSignature signature;
  double           model_accuracy{0.0};
  std::uint64_t    current_epoch{0};
  std::uint64_t    validation_node_id{0};
  double           timestamp{0.0};

  bool operator==(TipMetadata const &) const = default;
};

struct DagNode
{
  NodeId              id;
  std::vector<NodeId> parents;  // two entries, none for genesis
  TipMetadata         metadata;
  Digest              digest{};

  bool is_genesis() const noexcept { return parents.empty(); }
};

class LedgerError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Canonical little-endian byte image of the metadata body.
std::vector<std::uint8_t> serialize_metadata(TipMetadata const &metadata);

/// SHA-256(parent_1 || parent_2 || SHA-256(serialize_metadata(metadata))).
Digest compute_digest(Digest const &parent_1, Digest const &parent_2, TipMetadata const &metadata);

/**
 * Append-only DAG of model-update transactions.
 *
 * Forward edges point child -> parent ("approves"); the transpose is kept as
 * the approver lists. A node is a tip while nobody approves it. Mutation is
 * not synchronized: appends must be applied in a single total order.
 */
class Ledger
{
public:
  explicit Ledger(TipMetadata genesis_metadata = {});

  /// Throws LedgerError on unknown parents, out-of-range accuracy or timestamp regression.
  NodeId append(NodeId parent_1, NodeId parent_2, TipMetadata metadata);

  std::size_t size() const noexcept { return nodes_.size(); }
  bool        contains(NodeId id) const noexcept { return id.value < nodes_.size(); }

  /// Throws LedgerError for an unknown id.
  DagNode const &node(NodeId id) const;

  std::span<DagNode const> nodes() const noexcept { return nodes_; }

  /// Distinct nodes approving `id`, in append order.
  std::span<NodeId const> approvers(NodeId id) const;
  std::size_t             approver_count(NodeId id) const { return approvers(id).size(); }

  bool is_tip(NodeId id) const { return approver_count(id) == 0; }

  /// Current tips in ascending id order.
  std::vector<NodeId> tips() const;

private:
  std::vector<DagNode>             nodes_;
  std::vector<std::vector<NodeId>> approvers_;
  std::set<NodeId>                 tips_;
};

/// Self-contained copy of one ledger entry for offline checking.
struct PathRecord
{
  NodeId              id;
  std::vector<NodeId> parents;
  Digest              parent_digests[2]{};
  TipMetadata         metadata;
  Digest              digest{};
};

using VerificationPath = std::vector<PathRecord>;

/// First-parent walk from `from` back to genesis. Throws LedgerError for unknown ids.
VerificationPath extract_verification_path(Ledger const &ledger, NodeId from);

struct Verdict
{
  bool                  accepted{false};
  std::optional<NodeId> tampered_at;

  static Verdict accept() { return {true, std::nullopt}; }
  static Verdict tampered(NodeId id) { return {false, id}; }
};

/**
 * Recomputes each record's digest and checks first-parent linkage between
 * neighbours. Returns the first offending record, walking from the head.
 * Throws LedgerError on an empty path.
 */
Verdict verify_path(std::span<PathRecord const> path, Digest const &trusted_tip_digest);

}  // namespace tanglefl

template <>
struct std::hash<tanglefl::NodeId>
{
  std::size_t operator()(tanglefl::NodeId id) const noexcept
  {
    return std::hash<std::uint64_t>{}(id.value);
  }
};
