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

#include "tanglefl/metrics.hpp"

#include <json.hpp>

#include <ostream>
#include <stdexcept>

namespace tanglefl {

RunMetrics collect_metrics(EventLog const &log, std::optional<double> target)
{
  if (log.entries.empty())
  {
    throw std::invalid_argument("collect_metrics: empty log");
  }

  RunMetrics m;
  m.makespan      = log.end_time;
  m.terminated_by = log.terminated_by;

  double latency = 0.0;
  for (auto const &e : log.entries)
  {
    switch (e.kind)
    {
    case LogKind::upload:
      ++m.uploads;
      latency += e.time - e.selection_start;
      m.total_eval_cost += e.eval_cost;
      break;
    case LogKind::check:
      m.final_mean_accuracy = e.mean_test;
      if (target && !m.time_to_target && e.mean_test >= *target)
      {
        m.time_to_target = e.time;
      }
      break;
    case LogKind::selection:
    case LogKind::terminate:
      break;
    }
  }
  if (m.uploads > 0)
  {
    m.mean_latency           = latency / static_cast<double>(m.uploads);
    m.mean_latency_exclusive = (latency - m.total_eval_cost) / static_cast<double>(m.uploads);
  }
  m.uploads_per_sec = m.makespan > 0.0 ? static_cast<double>(m.uploads) / m.makespan : 0.0;
  return m;
}

void RunMetrics::write_summary_json(std::ostream &out) const
{
  nlohmann::ordered_json j;
  if (time_to_target)
  {
    j["time_to_target"] = *time_to_target;
  }
  else
  {
    j["time_to_target"] = "not reached";
  }
  j["final_mean_accuracy"]    = final_mean_accuracy;
  j["uploads_per_sec"]        = uploads_per_sec;
  j["mean_latency"]           = mean_latency;
  j["mean_latency_exclusive"] = mean_latency_exclusive;
  j["total_eval_cost"]        = total_eval_cost;
  j["makespan"]               = makespan;
  j["uploads"]                = uploads;
  j["terminated_by"]          = terminated_by;
  out << j.dump(2) << '\n';
}

}  // namespace tanglefl
