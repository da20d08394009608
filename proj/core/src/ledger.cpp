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

#include "tanglefl/ledger.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace tanglefl {
namespace {

void put_u64(std::vector<std::uint8_t> &out, std::uint64_t v)
{
  for (int i = 0; i < 8; ++i)
  {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

void put_u32(std::vector<std::uint8_t> &out, std::uint32_t v)
{
  for (int i = 0; i < 4; ++i)
  {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

void put_f64(std::vector<std::uint8_t> &out, double v)
{
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

std::string id_text(NodeId id)
{
  return std::to_string(id.value);
}

}  // namespace

std::vector<std::uint8_t> serialize_metadata(TipMetadata const &metadata)
{
  std::vector<std::uint8_t> out;
  out.reserve(8 + 4 + 8 * metadata.signature.size() + 8 * 4);
  put_u64(out, metadata.client_id);
  put_u32(out, static_cast<std::uint32_t>(metadata.signature.size()));
  for (double v : metadata.signature.entries)
  {
    put_f64(out, v);
  }
  put_f64(out, metadata.model_accuracy);
  put_u64(out, metadata.current_epoch);
  put_u64(out, metadata.validation_node_id);
  put_f64(out, metadata.timestamp);
  return out;
}

Digest compute_digest(Digest const &parent_1, Digest const &parent_2, TipMetadata const &metadata)
{
  auto const body = serialize_metadata(metadata);
  auto const body_hash = sha256(body);

  std::array<std::uint8_t, 96> header{};
  std::copy(parent_1.begin(), parent_1.end(), header.begin());
  std::copy(parent_2.begin(), parent_2.end(), header.begin() + 32);
  std::copy(body_hash.begin(), body_hash.end(), header.begin() + 64);
  return sha256(header);
}

Ledger::Ledger(TipMetadata genesis_metadata)
{
  if (!(genesis_metadata.model_accuracy >= 0.0 && genesis_metadata.model_accuracy <= 1.0))
  {
    throw LedgerError("genesis model_accuracy outside [0,1]");
  }
  DagNode genesis;
  genesis.id       = kGenesis;
  genesis.metadata = std::move(genesis_metadata);
  genesis.digest   = compute_digest(Digest{}, Digest{}, genesis.metadata);
  nodes_.push_back(std::move(genesis));
  approvers_.emplace_back();
  tips_.insert(kGenesis);
}

NodeId Ledger::append(NodeId parent_1, NodeId parent_2, TipMetadata metadata)
{
  for (auto p : {parent_1, parent_2})
  {
    if (!contains(p))
    {
      throw LedgerError("unknown parent " + id_text(p));
    }
  }
  if (!(metadata.model_accuracy >= 0.0 && metadata.model_accuracy <= 1.0))
  {
    throw LedgerError("model_accuracy outside [0,1]");
  }
  if (!std::isfinite(metadata.timestamp) ||
      metadata.timestamp < nodes_[parent_1.value].metadata.timestamp ||
      metadata.timestamp < nodes_[parent_2.value].metadata.timestamp)
  {
    throw LedgerError("timestamp regression against parent metadata");
  }

  DagNode node;
  node.id      = NodeId{nodes_.size()};
  node.parents = {parent_1, parent_2};
  node.digest  = compute_digest(nodes_[parent_1.value].digest, nodes_[parent_2.value].digest, metadata);
  node.metadata = std::move(metadata);

  approvers_[parent_1.value].push_back(node.id);
  if (parent_2 != parent_1)
  {
    approvers_[parent_2.value].push_back(node.id);
  }
  tips_.erase(parent_1);
  tips_.erase(parent_2);
  tips_.insert(node.id);

  approvers_.emplace_back();
  nodes_.push_back(std::move(node));
  return nodes_.back().id;
}

DagNode const &Ledger::node(NodeId id) const
{
  if (!contains(id))
  {
    throw LedgerError("unknown node " + id_text(id));
  }
  return nodes_[id.value];
}

std::span<NodeId const> Ledger::approvers(NodeId id) const
{
  if (!contains(id))
  {
    throw LedgerError("unknown node " + id_text(id));
  }
  return approvers_[id.value];
}

std::vector<NodeId> Ledger::tips() const
{
  return {tips_.begin(), tips_.end()};
}

VerificationPath extract_verification_path(Ledger const &ledger, NodeId from)
{
  VerificationPath path;
  NodeId           current = from;
  for (;;)
  {
    DagNode const &node = ledger.node(current);
    PathRecord     record;
    record.id       = node.id;
    record.parents  = node.parents;
    record.metadata = node.metadata;
    record.digest   = node.digest;
    if (!node.is_genesis())
    {
      record.parent_digests[0] = ledger.node(node.parents[0]).digest;
      record.parent_digests[1] = ledger.node(node.parents[1]).digest;
    }
    path.push_back(std::move(record));
    if (node.is_genesis())
    {
      break;
    }
    current = node.parents[0];
  }
  return path;
}

Verdict verify_path(std::span<PathRecord const> path, Digest const &trusted_tip_digest)
{
  if (path.empty())
  {
    throw LedgerError("cannot verify an empty path");
  }
  if (path.front().digest != trusted_tip_digest)
  {
    return Verdict::tampered(path.front().id);
  }

  for (std::size_t i = 0; i < path.size(); ++i)
  {
    PathRecord const &record = path[i];
    bool const        last   = i + 1 == path.size();

    // the walk must end at a parentless genesis and every other record has two parents
    if (last != record.parents.empty() || (!last && record.parents.size() != 2))
    {
      return Verdict::tampered(record.id);
    }
    if (last && (record.parent_digests[0] != Digest{} || record.parent_digests[1] != Digest{}))
    {
      return Verdict::tampered(record.id);
    }
    if (compute_digest(record.parent_digests[0], record.parent_digests[1], record.metadata) !=
        record.digest)
    {
      return Verdict::tampered(record.id);
    }
    if (!last)
    {
      PathRecord const &parent = path[i + 1];
      if (record.parents[0] != parent.id || record.parent_digests[0] != parent.digest ||
          !(parent.id < record.id))
      {
        return Verdict::tampered(record.id);
      }
    }
  }
  return Verdict::accept();
}

}  // namespace tanglefl
