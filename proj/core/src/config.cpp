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

#include "tanglefl/config.hpp"

#include "tanglefl/event_log.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace tanglefl {
namespace {

std::string describe(std::size_t line, std::string const &field, std::string const &message)
{
  std::string out;
  if (line > 0)
  {
    out += "line " + std::to_string(line) + ": ";
  }
  return out + field + ": " + message;
}

std::string trim(std::string const &s)
{
  auto const b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
  {
    return {};
  }
  auto const e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(std::string const &text)
{
  std::size_t used = 0;
  double      v    = 0.0;
  try
  {
    v = std::stod(text, &used);
  }
  catch (std::exception const &)
  {
    throw std::invalid_argument("expected a number, got '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v))
  {
    throw std::invalid_argument("expected a finite number, got '" + text + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(std::string const &text)
{
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
  {
    throw std::invalid_argument("expected a non-negative integer, got '" + text + "'");
  }
  try
  {
    return std::stoull(text);
  }
  catch (std::exception const &)
  {
    throw std::invalid_argument("integer out of range: '" + text + "'");
  }
}

bool parse_bool(std::string const &text)
{
  if (text == "true" || text == "1" || text == "yes")
  {
    return true;
  }
  if (text == "false" || text == "0" || text == "no")
  {
    return false;
  }
  throw std::invalid_argument("expected true or false, got '" + text + "'");
}

TaskKind parse_task(std::string const &text)
{
  if (text == "toy-digits")
  {
    return TaskKind::toy_digits;
  }
  if (text == "synthetic")
  {
    return TaskKind::synthetic;
  }
  throw std::invalid_argument("task must be toy-digits or synthetic");
}

using Setter = std::function<void(RunConfig &, std::string const &)>;

std::map<std::string, Setter> const &setters()
{
  static std::map<std::string, Setter> const table{
      {"task", [](RunConfig &c, std::string const &v) { c.task = parse_task(v); }},
      {"samples", [](RunConfig &c, std::string const &v) { c.samples = parse_unsigned(v); }},
      {"hidden", [](RunConfig &c, std::string const &v) { c.hidden = parse_unsigned(v); }},
      {"signature_groups",
       [](RunConfig &c, std::string const &v) { c.signature_groups = parse_unsigned(v); }},
      {"clients", [](RunConfig &c, std::string const &v) { c.clients = parse_unsigned(v); }},
      {"tips", [](RunConfig &c, std::string const &v) { c.selection.tips = parse_unsigned(v); }},
      {"lambda", [](RunConfig &c, std::string const &v) { c.selection.lambda = parse_real(v); }},
      {"alpha", [](RunConfig &c, std::string const &v) { c.selection.alpha = parse_real(v); }},
      {"prefilter",
       [](RunConfig &c, std::string const &v) {
         if (v == "auto")
         {
           c.selection.prefilter.reset();
         }
         else
         {
           c.selection.prefilter = parse_unsigned(v);
         }
       }},
      {"freshness_policy",
       [](RunConfig &c, std::string const &v) { c.selection.policy = parse_freshness_policy(v); }},
      {"tip_selection",
       [](RunConfig &c, std::string const &v) {
         if (v == "three-factor")
         {
           c.tip_selection = TipSelectionMode::three_factor;
         }
         else if (v == "random")
         {
           c.tip_selection = TipSelectionMode::random;
         }
         else
         {
           throw std::invalid_argument("tip_selection must be three-factor or random");
         }
       }},
      {"partition",
       [](RunConfig &c, std::string const &v) {
         auto const spec  = parse_partition(v);
         c.partition_mode = spec.mode;
         if (spec.mode == PartitionMode::dirichlet)
         {
           c.beta = spec.beta;
         }
       }},
      {"seed", [](RunConfig &c, std::string const &v) { c.seed = parse_unsigned(v); }},
      {"max_global_iters",
       [](RunConfig &c, std::string const &v) { c.max_global_iters = parse_unsigned(v); }},
      {"patience", [](RunConfig &c, std::string const &v) { c.patience = parse_unsigned(v); }},
      {"local_epochs", [](RunConfig &c, std::string const &v) { c.local_epochs = parse_unsigned(v); }},
      {"lr", [](RunConfig &c, std::string const &v) { c.lr = parse_real(v); }},
      {"batch_size", [](RunConfig &c, std::string const &v) { c.batch_size = parse_unsigned(v); }},
      {"target_accuracy",
       [](RunConfig &c, std::string const &v) {
         if (v == "none")
         {
           c.target_accuracy.reset();
         }
         else
         {
           c.target_accuracy = parse_real(v);
         }
       }},
      {"speed_factors",
       [](RunConfig &c, std::string const &v) {
         c.speed_factors.clear();
         if (v == "auto")
         {
           return;
         }
         std::stringstream ss(v);
         std::string       item;
         while (std::getline(ss, item, ','))
         {
           c.speed_factors.push_back(parse_real(trim(item)));
         }
       }},
      {"base_epoch_time", [](RunConfig &c, std::string const &v) { c.base_epoch_time = parse_real(v); }},
      {"eval_cost_per_sample",
       [](RunConfig &c, std::string const &v) { c.eval_cost_per_sample = parse_real(v); }},
      {"registry_query_cost",
       [](RunConfig &c, std::string const &v) { c.registry_query_cost = parse_real(v); }},
      {"trace", [](RunConfig &c, std::string const &v) { c.trace = parse_bool(v); }},
      {"out_dir", [](RunConfig &c, std::string const &v) { c.out_dir = v; }},
  };
  return table;
}

}  // namespace

ConfigError::ConfigError(std::size_t line, std::string const &field, std::string const &message)
  : std::runtime_error(describe(line, field, message))
  , line_{line}
  , field_{field}
  , message_{message}
{}

std::string task_name(TaskKind task)
{
  return task == TaskKind::toy_digits ? "toy-digits" : "synthetic";
}

void RunConfig::validate() const
{
  auto fail = [](std::string const &field, std::string const &msg) {
    throw ConfigError(0, field, msg);
  };
  if (clients < 1)
  {
    fail("clients", "must be >= 1");
  }
  if (samples < 10 * clients)
  {
    fail("samples", "must be at least 10 per client");
  }
  if (hidden < 1)
  {
    fail("hidden", "must be >= 1");
  }
  if (signature_groups < 1 || hidden % signature_groups != 0)
  {
    fail("signature_groups", "must be >= 1 and divide hidden");
  }
  if (selection.tips < 1)
  {
    fail("tips", "must be >= 1");
  }
  if (!(selection.lambda >= 0.0 && selection.lambda <= 1.0))
  {
    fail("lambda", "must lie in [0,1]");
  }
  if (!(selection.alpha > 0.0))
  {
    fail("alpha", "must be > 0");
  }
  if (selection.prefilter && *selection.prefilter < selection.unreachable_quota())
  {
    fail("prefilter", "must be >= N - round(lambda * N)");
  }
  if (partition_mode == PartitionMode::dirichlet && !(beta > 0.0))
  {
    fail("partition", "dirichlet beta must be > 0");
  }
  if (max_global_iters < 1)
  {
    fail("max_global_iters", "must be >= 1");
  }
  if (patience < 1)
  {
    fail("patience", "must be >= 1");
  }
  if (local_epochs < 1)
  {
    fail("local_epochs", "must be >= 1");
  }
  if (!(lr > 0.0))
  {
    fail("lr", "must be > 0");
  }
  if (batch_size < 1)
  {
    fail("batch_size", "must be >= 1");
  }
  if (target_accuracy && !(*target_accuracy > 0.0 && *target_accuracy <= 1.0))
  {
    fail("target_accuracy", "must lie in (0,1] or be none");
  }
  if (!speed_factors.empty())
  {
    if (speed_factors.size() != clients)
    {
      fail("speed_factors", "needs exactly one factor per client");
    }
    for (double s : speed_factors)
    {
      if (!(s > 0.0))
      {
        fail("speed_factors", "every factor must be > 0");
      }
    }
  }
  if (!(base_epoch_time > 0.0))
  {
    fail("base_epoch_time", "must be > 0");
  }
  if (!(eval_cost_per_sample >= 0.0))
  {
    fail("eval_cost_per_sample", "must be >= 0");
  }
  if (!(registry_query_cost >= 0.0))
  {
    fail("registry_query_cost", "must be >= 0");
  }
  if (out_dir.empty())
  {
    fail("out_dir", "must not be empty");
  }
}

RunConfig parse_config(std::istream &in)
{
  RunConfig                          config;
  std::set<std::string>              seen;
  std::map<std::string, std::size_t> line_of;
  std::string                        raw;
  std::size_t                        line_no = 0;
  while (std::getline(in, raw))
  {
    ++line_no;
    auto const  hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty())
    {
      continue;
    }
    auto const eq = line.find('=');
    if (eq == std::string::npos)
    {
      throw ConfigError(line_no, trim(line), "expected 'key = value'");
    }
    std::string const key   = trim(line.substr(0, eq));
    std::string const value = trim(line.substr(eq + 1));
    auto const        it    = setters().find(key);
    if (it == setters().end())
    {
      throw ConfigError(line_no, key, "unknown key");
    }
    if (!seen.insert(key).second)
    {
      throw ConfigError(line_no, key, "duplicate key");
    }
    if (value.empty())
    {
      throw ConfigError(line_no, key, "missing value");
    }
    try
    {
      it->second(config, value);
    }
    catch (std::invalid_argument const &e)
    {
      throw ConfigError(line_no, key, e.what());
    }
    line_of[key] = line_no;
  }

  try
  {
    config.validate();
  }
  catch (ConfigError const &e)
  {
    // re-anchor to the line that set the field, when there is one
    auto const at = line_of.find(e.field());
    throw ConfigError(at == line_of.end() ? 0 : at->second, e.field(), e.message());
  }
  return config;
}

RunConfig load_config(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError(0, "config", "cannot open '" + path + "'");
  }
  return parse_config(in);
}

void write_config(std::ostream &out, RunConfig const &c)
{
  PartitionSpec spec;
  spec.mode = c.partition_mode;
  spec.beta = c.beta;

  std::string speeds = "auto";
  if (!c.speed_factors.empty())
  {
    speeds.clear();
    for (std::size_t i = 0; i < c.speed_factors.size(); ++i)
    {
      speeds += (i ? "," : "") + format_double(c.speed_factors[i]);
    }
  }

  out << "# effective configuration (all defaults resolved)\n";
  out << "task = " << task_name(c.task) << '\n';
  out << "samples = " << c.samples << '\n';
  out << "hidden = " << c.hidden << '\n';
  out << "signature_groups = " << c.signature_groups << '\n';
  out << "clients = " << c.clients << '\n';
  out << "tips = " << c.selection.tips << '\n';
  out << "lambda = " << format_double(c.selection.lambda) << '\n';
  out << "alpha = " << format_double(c.selection.alpha) << '\n';
  out << "prefilter = "
      << (c.selection.prefilter ? std::to_string(*c.selection.prefilter) : std::string("auto")) << '\n';
  out << "freshness_policy = " << to_string(c.selection.policy) << '\n';
  out << "tip_selection = "
      << (c.tip_selection == TipSelectionMode::three_factor ? "three-factor" : "random") << '\n';
  out << "partition = " << format_partition(spec) << '\n';
  out << "seed = " << c.seed << '\n';
  out << "max_global_iters = " << c.max_global_iters << '\n';
  out << "patience = " << c.patience << '\n';
  out << "local_epochs = " << c.local_epochs << '\n';
  out << "lr = " << format_double(c.lr) << '\n';
  out << "batch_size = " << c.batch_size << '\n';
  out << "target_accuracy = " << (c.target_accuracy ? format_double(*c.target_accuracy) : "none")
      << '\n';
  out << "speed_factors = " << speeds << '\n';
  out << "base_epoch_time = " << format_double(c.base_epoch_time) << '\n';
  out << "eval_cost_per_sample = " << format_double(c.eval_cost_per_sample) << '\n';
  out << "registry_query_cost = " << format_double(c.registry_query_cost) << '\n';
  out << "trace = " << (c.trace ? "true" : "false") << '\n';
  out << "out_dir = " << c.out_dir << '\n';
}

}  // namespace tanglefl
