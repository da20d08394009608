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

#include "tanglefl/ledger_io.hpp"

#include <json.hpp>

#include <istream>
#include <map>
#include <ostream>
#include <string>

namespace tanglefl {
namespace {

using json = nlohmann::json;

nlohmann::ordered_json node_to_json(DagNode const &node)
{
  nlohmann::ordered_json parents = nlohmann::ordered_json::array();
  for (auto p : node.parents)
  {
    parents.push_back(p.value);
  }
  // key order is part of the byte-exact export, so build with ordered_json
  nlohmann::ordered_json j;
  j["id"]                 = node.id.value;
  j["parents"]            = parents;
  j["client_id"]          = node.metadata.client_id;
  j["signature"]          = node.metadata.signature.entries;
  j["model_accuracy"]     = node.metadata.model_accuracy;
  j["current_epoch"]      = node.metadata.current_epoch;
  j["validation_node_id"] = node.metadata.validation_node_id;
  j["timestamp"]          = node.metadata.timestamp;
  j["digest"]             = to_hex(node.digest);
  return j;
}

DagNode node_from_json(json const &j)
{
  DagNode node;
  node.id.value = j.at("id").get<std::uint64_t>();
  for (auto const &p : j.at("parents"))
  {
    node.parents.push_back(NodeId{p.get<std::uint64_t>()});
  }
  if (!node.parents.empty() && node.parents.size() != 2)
  {
    throw LedgerError("node " + std::to_string(node.id.value) + " must have 0 or 2 parents");
  }
  node.metadata.client_id          = j.at("client_id").get<std::uint64_t>();
  node.metadata.signature.entries  = j.at("signature").get<std::vector<double>>();
  node.metadata.model_accuracy     = j.at("model_accuracy").get<double>();
  node.metadata.current_epoch      = j.at("current_epoch").get<std::uint64_t>();
  node.metadata.validation_node_id = j.at("validation_node_id").get<std::uint64_t>();
  node.metadata.timestamp          = j.at("timestamp").get<double>();
  node.digest                      = digest_from_hex(j.at("digest").get<std::string>());
  return node;
}

}  // namespace

std::string node_to_json_line(DagNode const &node)
{
  return node_to_json(node).dump();
}

DagNode node_from_json_line(std::string const &line)
{
  return node_from_json(json::parse(line));
}

void write_ledger_jsonl(std::ostream &out, Ledger const &ledger)
{
  for (auto const &node : ledger.nodes())
  {
    out << node_to_json_line(node) << '\n';
  }
}

std::vector<DagNode> read_ledger_jsonl(std::istream &in)
{
  std::vector<DagNode> nodes;
  std::string          line;
  std::size_t          line_no = 0;
  while (std::getline(in, line))
  {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
    {
      continue;
    }
    try
    {
      nodes.push_back(node_from_json(json::parse(line)));
    }
    catch (std::exception const &e)
    {
      throw LedgerError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return nodes;
}

Ledger rebuild_ledger(std::vector<DagNode> const &nodes)
{
  if (nodes.empty() || !nodes.front().is_genesis() || nodes.front().id != kGenesis)
  {
    throw LedgerError("export must start with the genesis node");
  }
  Ledger ledger(nodes.front().metadata);
  for (std::size_t i = 1; i < nodes.size(); ++i)
  {
    auto const &n = nodes[i];
    if (n.id.value != i || n.parents.size() != 2)
    {
      throw LedgerError("export node " + std::to_string(n.id.value) + " is out of sequence");
    }
    ledger.append(n.parents[0], n.parents[1], n.metadata);
  }
  return ledger;
}

VerificationPath path_from_export(std::vector<DagNode> const &nodes, Digest const &tip_digest)
{
  std::map<std::uint64_t, DagNode const *> by_id;
  DagNode const                           *tip = nullptr;
  for (auto const &n : nodes)
  {
    by_id[n.id.value] = &n;
    if (tip == nullptr && n.digest == tip_digest)
    {
      tip = &n;
    }
  }
  if (tip == nullptr)
  {
    throw LedgerError("unknown tip digest " + to_hex(tip_digest));
  }

  auto lookup = [&](NodeId id) -> DagNode const & {
    auto it = by_id.find(id.value);
    if (it == by_id.end())
    {
      throw LedgerError("export references missing node " + std::to_string(id.value));
    }
    return *it->second;
  };

  VerificationPath path;
  DagNode const   *current = tip;
  for (std::size_t guard = 0; guard <= nodes.size(); ++guard)
  {
    PathRecord record;
    record.id       = current->id;
    record.parents  = current->parents;
    record.metadata = current->metadata;
    record.digest   = current->digest;
    if (!current->is_genesis())
    {
      record.parent_digests[0] = lookup(current->parents[0]).digest;
      record.parent_digests[1] = lookup(current->parents[1]).digest;
    }
    path.push_back(std::move(record));
    if (current->is_genesis())
    {
      return path;
    }
    current = &lookup(current->parents[0]);
  }
  throw LedgerError("export contains a parent cycle");
}

}  // namespace tanglefl
