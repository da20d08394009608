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

#include "tanglefl/event_log.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace tanglefl {

struct RunMetrics
{
  std::optional<double> time_to_target;  // first check with mean test accuracy >= target
  double                final_mean_accuracy{0.0};
  double                uploads_per_sec{0.0};
  double                mean_latency{0.0};            // selection start -> append
  double                mean_latency_exclusive{0.0};  // same, minus tip-evaluation cost
  double                total_eval_cost{0.0};
  double                makespan{0.0};
  std::size_t           uploads{0};
  std::string           terminated_by;

  /// {time_to_target, final_mean_accuracy, uploads_per_sec, mean_latency, terminated_by, ...}
  void write_summary_json(std::ostream &out) const;
};

/// Throws std::invalid_argument on an empty log.
RunMetrics collect_metrics(EventLog const &log, std::optional<double> target);

}  // namespace tanglefl
