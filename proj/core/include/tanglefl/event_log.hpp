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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tanglefl {

enum class LogKind
{
  selection,
  upload,
  check,
  terminate
};

std::string to_string(LogKind kind);

/**
 * One line of the replayable event log. Which fields are meaningful depends on
 * `kind`; the JSON form only carries the relevant ones.
 */
struct LogEntry
{
  LogKind       kind{LogKind::upload};
  double        time{0.0};
  std::uint64_t client{0};
  std::uint64_t epoch{0};

  // upload
  double                 selection_start{0.0};
  double                 eval_cost{0.0};
  double                 validation_accuracy{0.0};
  double                 test_accuracy{0.0};
  std::optional<DagNode> node;

  // selection
  std::size_t         ledger_size{0};
  std::size_t         reachable_pool{0};
  std::size_t         unreachable_pool{0};
  std::size_t         reachable_picks{0};
  std::size_t         reachable_quota{0};
  std::size_t         unreachable_quota{0};
  std::size_t         evaluations{0};
  std::vector<NodeId> chosen;

  // check
  double mean_validation{0.0};
  double mean_test{0.0};

  // terminate
  std::string reason;
};

struct EventLog
{
  std::string            policy;
  std::vector<LogEntry>  entries;
  double                 end_time{0.0};
  std::string            terminated_by;
  std::optional<DagNode> genesis;  // set by ledger-backed policies

  void write_jsonl(std::ostream &out) const;

  /// Throws std::runtime_error with the line number on malformed input.
  static EventLog read_jsonl(std::istream &in);

  /// CSV "time,client,epoch,event,accuracy" (check rows carry the publisher id).
  void write_metrics_csv(std::ostream &out) const;
};

/// Shortest round-trip formatting shared by every text artifact.
std::string format_double(double value);

}  // namespace tanglefl
