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

#include "cli.hpp"

#include "tanglefl/event_log.hpp"
#include "tanglefl/ledger_io.hpp"
#include "tanglefl/metrics.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tanglefl::cli {
namespace {

namespace fs = std::filesystem;

std::ofstream open_artifact(fs::path const &dir, char const *name)
{
  std::ofstream file(dir / name, std::ios::binary);
  if (!file)
  {
    throw std::runtime_error("cannot write " + (dir / name).string());
  }
  return file;
}

std::string trim(std::string s)
{
  auto const first = s.find_first_not_of(" \t");
  if (first == std::string::npos)
  {
    return {};
  }
  auto const last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::string ttt_cell(std::optional<double> ttt)
{
  return ttt ? format_double(*ttt) : "inf";
}

void write_run_artifacts(fs::path const &dir, RunConfig const &config, RunResult const &result)
{
  fs::create_directories(dir);
  {
    auto f = open_artifact(dir, kSummaryFile);
    result.metrics.write_summary_json(f);
  }
  {
    auto f = open_artifact(dir, kMetricsFile);
    result.log.write_metrics_csv(f);
  }
  {
    auto f = open_artifact(dir, kLedgerFile);
    write_ledger_jsonl(f, result.ledger);
  }
  {
    auto f = open_artifact(dir, kConfigFile);
    write_config(f, config);
  }
  {
    auto f = open_artifact(dir, kReplayFile);
    result.log.write_jsonl(f);
  }
  {
    auto f = open_artifact(dir, kSimilarityFile);
    result.registry.write_csv(f);
  }
  if (config.trace)
  {
    auto f = open_artifact(dir, kTraceFile);
    write_trace_csv(f, result.trace);
  }
}

}  // namespace

RunConfig resolve_config(RunArgs const &args)
{
  RunConfig config = args.config_path ? load_config(*args.config_path) : RunConfig{};
  if (args.out_dir)
  {
    config.out_dir = *args.out_dir;
  }
  if (args.seed)
  {
    config.seed = *args.seed;
  }
  if (args.trace)
  {
    config.trace = true;
  }
  config.validate();
  return config;
}

std::vector<Policy> parse_policy_list(std::string const &text)
{
  std::vector<Policy> policies;
  std::stringstream   in(text);
  std::string         item;
  while (std::getline(in, item, ','))
  {
    item = trim(item);
    if (item.empty())
    {
      continue;
    }
    auto const p = parse_policy(item);
    if (std::find(policies.begin(), policies.end(), p) == policies.end())
    {
      policies.push_back(p);
    }
  }
  if (policies.empty())
  {
    throw std::invalid_argument("policy list is empty");
  }
  return policies;
}

double median(std::vector<double> values)
{
  if (values.empty())
  {
    return std::numeric_limits<double>::quiet_NaN();
  }
  std::sort(values.begin(), values.end());
  auto const n = values.size();
  if (n % 2 == 1)
  {
    return values[n / 2];
  }
  double const lo = values[n / 2 - 1];
  double const hi = values[n / 2];
  if (std::isinf(lo) || std::isinf(hi))
  {
    return std::isinf(lo) ? lo : hi;
  }
  return lo + (hi - lo) / 2.0;
}

int cmd_run(RunArgs const &args, std::ostream &out, std::ostream &err)
{
  RunConfig config;
  Policy    policy{};
  try
  {
    config = resolve_config(args);
    policy = parse_policy(args.policy);
  }
  catch (ConfigError const &e)
  {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  }
  catch (std::exception const &e)
  {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try
  {
    auto const result = run_baseline(config, policy);
    fs::path const dir(config.out_dir);
    write_run_artifacts(dir, config, result);

    out << "policy " << to_string(policy) << ": " << result.metrics.uploads << " uploads, final accuracy "
        << format_double(result.metrics.final_mean_accuracy) << ", terminated by "
        << result.metrics.terminated_by << '\n';
    out << "artifacts in " << dir.string() << '\n';
  }
  catch (std::exception const &e)
  {
    err << "run failed: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_verify(std::string const &ledger_path, std::string const &tip_hex, std::ostream &out,
               std::ostream &err)
{
  Digest tip{};
  try
  {
    tip = digest_from_hex(tip_hex);
  }
  catch (std::exception const &e)
  {
    err << "bad tip digest: " << e.what() << '\n';
    return kExitUsage;
  }

  std::vector<DagNode> nodes;
  try
  {
    std::ifstream in(ledger_path);
    if (!in)
    {
      throw std::runtime_error("cannot open " + ledger_path);
    }
    nodes = read_ledger_jsonl(in);
  }
  catch (std::exception const &e)
  {
    err << "cannot read ledger export: " << e.what() << '\n';
    return kExitRuntime;
  }

  VerificationPath path;
  try
  {
    path = path_from_export(nodes, tip);
  }
  catch (std::exception const &e)
  {
    err << "unknown tip: " << e.what() << '\n';
    return kExitVerifyFailed;
  }

  auto const verdict = verify_path(path, tip);
  if (verdict.accepted)
  {
    out << "accepted\n";
    return kExitOk;
  }
  out << "tampered-at(" << verdict.tampered_at->value << ")\n";
  return kExitVerifyFailed;
}

int cmd_bench(BenchArgs const &args, std::ostream &out, std::ostream &err)
{
  RunConfig           base;
  std::vector<Policy> policies;
  try
  {
    base     = resolve_config(args.run);
    policies = parse_policy_list(args.policies);
    if (args.seeds == 0)
    {
      throw std::invalid_argument("--seeds must be positive");
    }
  }
  catch (ConfigError const &e)
  {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  }
  catch (std::exception const &e)
  {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try
  {
    fs::path const dir(base.out_dir);
    fs::create_directories(dir);
    auto csv = open_artifact(dir, kBenchFile);
    csv << "policy,seed,time_to_target,final_accuracy\n";

    for (auto const policy : policies)
    {
      std::vector<double> ttts;
      std::vector<double> finals;
      for (std::size_t i = 0; i < args.seeds; ++i)
      {
        RunConfig config = base;
        config.seed      = base.seed + i;
        auto const r     = run_baseline(config, policy);
        ttts.push_back(r.metrics.time_to_target.value_or(std::numeric_limits<double>::infinity()));
        finals.push_back(r.metrics.final_mean_accuracy);
        csv << to_string(policy) << ',' << config.seed << ',' << ttt_cell(r.metrics.time_to_target) << ','
            << format_double(r.metrics.final_mean_accuracy) << '\n';
      }
      double const mt = median(ttts);
      double const mf = median(finals);
      csv << to_string(policy) << ",median," << (std::isinf(mt) ? "inf" : format_double(mt)) << ','
          << format_double(mf) << '\n';
      out << to_string(policy) << ": median time-to-target " << (std::isinf(mt) ? "not reached" : format_double(mt))
          << ", median final accuracy " << format_double(mf) << '\n';
    }
    out << "table in " << (dir / kBenchFile).string() << '\n';
  }
  catch (std::exception const &e)
  {
    err << "bench failed: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_export_dag(std::string const &replay_path, std::optional<std::string> const &out_dir,
                   std::ostream &out, std::ostream &err)
{
  try
  {
    std::ifstream in(replay_path);
    if (!in)
    {
      throw std::runtime_error("cannot open " + replay_path);
    }
    auto const log = EventLog::read_jsonl(in);
    if (!log.genesis)
    {
      throw std::runtime_error("replay of policy '" + log.policy + "' carries no ledger");
    }
    std::vector<DagNode> nodes{*log.genesis};
    for (auto const &e : log.entries)
    {
      if (e.kind == LogKind::upload && e.node)
      {
        nodes.push_back(*e.node);
      }
    }
    std::sort(nodes.begin(), nodes.end(), [](auto const &a, auto const &b) { return a.id < b.id; });

    // re-append so that every recorded digest is checked on the way out
    auto const ledger = rebuild_ledger(nodes);
    for (auto const &n : nodes)
    {
      if (ledger.node(n.id).digest != n.digest)
      {
        throw std::runtime_error("recorded digest of node " + std::to_string(n.id.value) + " does not match");
      }
    }

    if (out_dir)
    {
      fs::path const dir(*out_dir);
      fs::create_directories(dir);
      auto f = open_artifact(dir, kLedgerFile);
      write_ledger_jsonl(f, ledger);
    }
    else
    {
      write_ledger_jsonl(out, ledger);
    }
  }
  catch (std::exception const &e)
  {
    err << "export failed: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int main_entry(int argc, char const *const *argv, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Asynchronous federated learning over a DAG ledger"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto   *run = app.add_subcommand("run", "run one simulation and write its artifacts");
  run->add_option("--config", run_args.config_path, "config file (defaults if omitted)");
  run->add_option("--out", run_args.out_dir, "output directory");
  run->add_option("--seed", run_args.seed, "override the config seed");
  run->add_flag("--trace", run_args.trace, "write per-candidate selection trace");
  run->add_option("--policy", run_args.policy, "dag-afl | sync-fedavg | centralized | independent | pure-async");

  std::string ledger_path;
  std::string tip_hex;
  auto       *verify = app.add_subcommand("verify", "verify the path to a tip of a ledger export");
  verify->add_option("ledger", ledger_path, "ledger export (JSON lines)")->required();
  verify->add_option("tip", tip_hex, "trusted tip digest (hex)")->required();

  BenchArgs bench_args;
  auto     *bench = app.add_subcommand("bench", "compare policies over consecutive seeds");
  bench->add_option("--config", bench_args.run.config_path, "config file (defaults if omitted)");
  bench->add_option("--out", bench_args.run.out_dir, "output directory");
  bench->add_option("--seed", bench_args.run.seed, "first seed");
  bench->add_option("--policies", bench_args.policies, "comma separated policy names")->capture_default_str();
  bench->add_option("--seeds", bench_args.seeds, "number of seeds")->capture_default_str();

  std::string                replay_path;
  std::optional<std::string> export_out;
  auto *export_dag = app.add_subcommand("export-dag", "re-emit the ledger recorded in a replay file");
  export_dag->add_option("replay", replay_path, "replay file (events.jsonl)")->required();
  export_dag->add_option("--out", export_out, "output directory (stdout if omitted)");

  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::ParseError const &e)
  {
    int const code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (run->parsed())
  {
    return cmd_run(run_args, out, err);
  }
  if (verify->parsed())
  {
    return cmd_verify(ledger_path, tip_hex, out, err);
  }
  if (bench->parsed())
  {
    return cmd_bench(bench_args, out, err);
  }
  return cmd_export_dag(replay_path, export_out, out, err);
}

}  // namespace tanglefl::cli
