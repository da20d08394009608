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

#include "tanglefl/event_log.hpp"

#include "tanglefl/ledger_io.hpp"

#include <json.hpp>

#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace tanglefl {
namespace {

using json = nlohmann::ordered_json;

LogKind parse_kind(std::string const &s)
{
  if (s == "selection")
  {
    return LogKind::selection;
  }
  if (s == "upload")
  {
    return LogKind::upload;
  }
  if (s == "check")
  {
    return LogKind::check;
  }
  if (s == "terminate")
  {
    return LogKind::terminate;
  }
  throw std::invalid_argument("unknown event type '" + s + "'");
}

}  // namespace

std::string to_string(LogKind kind)
{
  switch (kind)
  {
  case LogKind::selection:
    return "selection";
  case LogKind::upload:
    return "upload";
  case LogKind::check:
    return "check";
  case LogKind::terminate:
    return "terminate";
  }
  return "?";
}

std::string format_double(double value)
{
  char       buf[32];
  auto const res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void EventLog::write_jsonl(std::ostream &out) const
{
  json header;
  header["type"]          = "run";
  header["policy"]        = policy;
  header["end_time"]      = end_time;
  header["terminated_by"] = terminated_by;
  if (genesis)
  {
    header["genesis"] = json::parse(node_to_json_line(*genesis));
  }
  out << header.dump() << '\n';

  for (auto const &e : entries)
  {
    json j;
    j["type"] = to_string(e.kind);
    j["time"] = e.time;
    switch (e.kind)
    {
    case LogKind::selection:
    {
      j["client"]            = e.client;
      j["epoch"]             = e.epoch;
      j["ledger_size"]       = e.ledger_size;
      j["reachable_pool"]    = e.reachable_pool;
      j["unreachable_pool"]  = e.unreachable_pool;
      j["reachable_picks"]   = e.reachable_picks;
      j["reachable_quota"]   = e.reachable_quota;
      j["unreachable_quota"] = e.unreachable_quota;
      j["evaluations"]       = e.evaluations;
      json chosen            = json::array();
      for (auto id : e.chosen)
      {
        chosen.push_back(id.value);
      }
      j["chosen"] = chosen;
      break;
    }
    case LogKind::upload:
      j["client"]              = e.client;
      j["epoch"]               = e.epoch;
      j["selection_start"]     = e.selection_start;
      j["eval_cost"]           = e.eval_cost;
      j["validation_accuracy"] = e.validation_accuracy;
      j["test_accuracy"]       = e.test_accuracy;
      if (e.node)
      {
        j["node"] = json::parse(node_to_json_line(*e.node));
      }
      break;
    case LogKind::check:
      j["mean_validation"] = e.mean_validation;
      j["mean_test"]       = e.mean_test;
      break;
    case LogKind::terminate:
      j["reason"] = e.reason;
      break;
    }
    out << j.dump() << '\n';
  }
}

EventLog EventLog::read_jsonl(std::istream &in)
{
  EventLog    log;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line))
  {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
    {
      continue;
    }
    try
    {
      auto const j    = json::parse(line);
      auto const type = j.at("type").get<std::string>();
      if (type == "run")
      {
        log.policy        = j.at("policy").get<std::string>();
        log.end_time      = j.at("end_time").get<double>();
        log.terminated_by = j.at("terminated_by").get<std::string>();
        if (j.contains("genesis"))
        {
          log.genesis = node_from_json_line(j.at("genesis").dump());
        }
        continue;
      }
      LogEntry e;
      e.kind = parse_kind(type);
      e.time = j.at("time").get<double>();
      switch (e.kind)
      {
      case LogKind::selection:
        e.client            = j.at("client").get<std::uint64_t>();
        e.epoch             = j.at("epoch").get<std::uint64_t>();
        e.ledger_size       = j.at("ledger_size").get<std::size_t>();
        e.reachable_pool    = j.at("reachable_pool").get<std::size_t>();
        e.unreachable_pool  = j.at("unreachable_pool").get<std::size_t>();
        e.reachable_picks   = j.at("reachable_picks").get<std::size_t>();
        e.reachable_quota   = j.at("reachable_quota").get<std::size_t>();
        e.unreachable_quota = j.at("unreachable_quota").get<std::size_t>();
        e.evaluations       = j.at("evaluations").get<std::size_t>();
        for (auto const &id : j.at("chosen"))
        {
          e.chosen.push_back(NodeId{id.get<std::uint64_t>()});
        }
        break;
      case LogKind::upload:
        e.client              = j.at("client").get<std::uint64_t>();
        e.epoch               = j.at("epoch").get<std::uint64_t>();
        e.selection_start     = j.at("selection_start").get<double>();
        e.eval_cost           = j.at("eval_cost").get<double>();
        e.validation_accuracy = j.at("validation_accuracy").get<double>();
        e.test_accuracy       = j.at("test_accuracy").get<double>();
        if (j.contains("node"))
        {
          e.node = node_from_json_line(j.at("node").dump());
        }
        break;
      case LogKind::check:
        e.mean_validation = j.at("mean_validation").get<double>();
        e.mean_test       = j.at("mean_test").get<double>();
        break;
      case LogKind::terminate:
        e.reason = j.at("reason").get<std::string>();
        break;
      }
      log.entries.push_back(std::move(e));
    }
    catch (std::exception const &ex)
    {
      throw std::runtime_error("event log line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return log;
}

void EventLog::write_metrics_csv(std::ostream &out) const
{
  out << "time,client,epoch,event,accuracy\n";
  for (auto const &e : entries)
  {
    switch (e.kind)
    {
    case LogKind::upload:
      out << format_double(e.time) << ',' << e.client << ',' << e.epoch << ",upload,"
          << format_double(e.test_accuracy) << '\n';
      break;
    case LogKind::check:
      out << format_double(e.time) << ",publisher,,check," << format_double(e.mean_test) << '\n';
      break;
    case LogKind::terminate:
      out << format_double(e.time) << ",publisher,,terminate:" << e.reason << ",\n";
      break;
    case LogKind::selection:
      break;
    }
  }
}

}  // namespace tanglefl
