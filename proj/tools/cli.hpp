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
#include "tanglefl/simulation.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tanglefl::cli {

enum ExitCode : int
{
  kExitOk           = 0,
  kExitUsage        = 1,
  kExitRuntime      = 2,
  kExitVerifyFailed = 3
};

// artifact names inside the output directory
inline constexpr char const *kSummaryFile    = "summary.json";
inline constexpr char const *kMetricsFile    = "metrics.csv";
inline constexpr char const *kLedgerFile     = "ledger.jsonl";
inline constexpr char const *kConfigFile     = "config.txt";
inline constexpr char const *kReplayFile     = "events.jsonl";
inline constexpr char const *kSimilarityFile = "similarity.csv";
inline constexpr char const *kTraceFile      = "trace.csv";
inline constexpr char const *kBenchFile      = "bench.csv";

struct RunArgs
{
  std::optional<std::string>   config_path;
  std::optional<std::string>   out_dir;
  std::optional<std::uint64_t> seed;
  bool                         trace{false};
  std::string                  policy{"dag-afl"};
};

struct BenchArgs
{
  RunArgs     run;
  std::string policies{"dag-afl,sync-fedavg"};
  std::size_t seeds{10};
};

/// Config file (or defaults) with command-line overrides applied and validated.
RunConfig resolve_config(RunArgs const &args);

int cmd_run(RunArgs const &args, std::ostream &out, std::ostream &err);
int cmd_verify(std::string const &ledger_path, std::string const &tip_hex, std::ostream &out,
               std::ostream &err);
int cmd_bench(BenchArgs const &args, std::ostream &out, std::ostream &err);

/// Re-emits the ledger recorded in a replay file; to `<out_dir>/ledger.jsonl` or `out`.
int cmd_export_dag(std::string const &replay_path, std::optional<std::string> const &out_dir,
                   std::ostream &out, std::ostream &err);

/// Comma separated policy names. Throws std::invalid_argument if empty or unknown.
std::vector<Policy> parse_policy_list(std::string const &text);

/// Median with +inf allowed; NaN for an empty input.
double median(std::vector<double> values);

/// Parses argv and dispatches to a subcommand.
int main_entry(int argc, char const *const *argv, std::ostream &out, std::ostream &err);

}  // namespace tanglefl::cli
