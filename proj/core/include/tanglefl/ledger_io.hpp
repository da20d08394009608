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

#include "tanglefl/ledger.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace tanglefl {

/// One JSON object per node:
/// {"id","parents","client_id","signature","model_accuracy","current_epoch",
///  "validation_node_id","timestamp","digest"}.
std::string node_to_json_line(DagNode const &node);
void        write_ledger_jsonl(std::ostream &out, Ledger const &ledger);

/// Inverse of node_to_json_line. Throws LedgerError or nlohmann errors.
DagNode node_from_json_line(std::string const &line);

/// Parses an export back into nodes without recomputing anything.
/// Throws LedgerError with the line number on malformed input.
std::vector<DagNode> read_ledger_jsonl(std::istream &in);

/// Rebuilds a ledger by re-appending exported nodes (digests recomputed).
Ledger rebuild_ledger(std::vector<DagNode> const &nodes);

/**
 * Builds the first-parent path for the exported node whose recorded digest is
 * `tip_digest`, taking parent digests from the recorded parent entries.
 * Throws LedgerError if no node carries that digest or a parent is missing.
 */
VerificationPath path_from_export(std::vector<DagNode> const &nodes, Digest const &tip_digest);

}  // namespace tanglefl
