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

#include "tanglefl/config.hpp"
#include "tanglefl/event_log.hpp"

#include <optional>
#include <string>

namespace tanglefl::detail {

/// Termination logic of the task publisher, shared by every coordination policy.
class Publisher
{
public:
  /// `checks_per_round` converts the configured patience (in global rounds)
  /// into publisher checks: 1 for round-based policies, K when every upload is checked.
  Publisher(RunConfig const &config, EventLog &log, std::size_t checks_per_round = 1)
    : target_{config.target_accuracy}
    , patience_{config.patience * checks_per_round}
    , log_{log}
  {}

  /// Logs a check; returns true if this check terminated the run.
  bool check(double now, double mean_validation, double mean_test)
  {
    LogEntry e;
    e.kind            = LogKind::check;
    e.time            = now;
    e.mean_validation = mean_validation;
    e.mean_test       = mean_test;
    log_.entries.push_back(e);

    if (terminated_)
    {
      return false;
    }
    if (target_ && mean_test >= *target_)
    {
      terminate(now, "target");
      return true;
    }
    if (!best_ || mean_validation > *best_)
    {
      best_  = mean_validation;
      stale_ = 0;
    }
    else if (++stale_ >= patience_)
    {
      terminate(now, "patience");
      return true;
    }
    return false;
  }

  void terminate(double now, std::string const &reason)
  {
    if (terminated_)
    {
      return;
    }
    terminated_ = true;
    LogEntry e;
    e.kind   = LogKind::terminate;
    e.time   = now;
    e.reason = reason;
    log_.entries.push_back(e);
    log_.terminated_by = reason;
  }

  bool terminated() const noexcept { return terminated_; }

private:
  std::optional<double> target_;
  std::size_t           patience_;
  EventLog             &log_;
  std::optional<double> best_;
  std::size_t           stale_{0};
  bool                  terminated_{false};
};

}  // namespace tanglefl::detail
