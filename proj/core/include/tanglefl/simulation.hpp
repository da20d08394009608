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
#include "tanglefl/dataset.hpp"
#include "tanglefl/event_log.hpp"
#include "tanglefl/ledger.hpp"
#include "tanglefl/metrics.hpp"
#include "tanglefl/model.hpp"
#include "tanglefl/signature.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace tanglefl {

enum class Policy
{
  dag_afl,
  centralized,
  independent,
  sync_fedavg,
  pure_async
};

std::string to_string(Policy policy);

/// Throws std::invalid_argument for unknown names.
Policy parse_policy(std::string const &name);

/// Off-ledger model storage keyed by ledger id (the simulated P2P layer).
class ModelStore
{
public:
  void               put(NodeId id, ModelParams model);
  ModelParams const &get(NodeId id) const;
  bool               contains(NodeId id) const { return models_.contains(id); }
  std::size_t        size() const noexcept { return models_.size(); }

private:
  std::unordered_map<NodeId, ModelParams> models_;
};

struct ClientState
{
  std::uint64_t    id{0};
  double           speed_factor{1.0};
  std::uint64_t    epoch{0};  // T: completed train-upload cycles
  NodeId           latest_node{kGenesis};
  DataSplit        data;
  ModelParams      model;
  FeatureSignature signature;
  double           validation_accuracy{0.0};
  double           test_accuracy{0.0};

  // retained audit trail: first-parent path from the latest upload
  VerificationPath path;
  Digest           trusted_digest{};
};

struct BootstrapState
{
  Ledger                   ledger;
  ModelStore               store;
  std::vector<ClientState> clients;
  ModelParams              initial_model;
  Dataset                  global_test;  // union of the client test splits
};

/**
 * Generates the task data, splits it per client and seeds the ledger with the
 * publisher's genesis entry. Everything is derived from `config.seed`.
 */
BootstrapState bootstrap(RunConfig const &config);

/// Seed of the local-training stream for `client` producing epoch `epoch`.
std::uint64_t train_seed(std::uint64_t run_seed, std::uint64_t client, std::uint64_t epoch);

/// Explicit list if configured, otherwise log-uniform in [1, 5] from the seed.
std::vector<double> resolve_speed_factors(RunConfig const &config);

struct TraceRow
{
  double                time{0.0};
  std::uint64_t         selector{0};
  NodeId                tip;
  bool                  reachable{false};
  double                tipc{0.0};
  double                freshness{0.0};
  std::optional<double> similarity;
  std::optional<double> accuracy;
  bool                  chosen{false};
};

void write_trace_csv(std::ostream &out, std::vector<TraceRow> const &rows);

struct RunResult
{
  EventLog                 log;
  RunMetrics               metrics;
  Ledger                   ledger;
  ModelStore               store;
  SimilarityRegistry       registry;
  std::vector<ClientState> clients;
  std::vector<TraceRow>    trace;
};

/**
 * Event-driven run of the DAG protocol. Each client loops
 * select -> aggregate -> train -> evaluate -> sign -> append until the
 * publisher terminates the run (target, patience) or every client has done
 * `max_global_iters` cycles.
 */
RunResult run(RunConfig const &config);

/// Same substrate, different coordination. `Policy::dag_afl` forwards to run().
RunResult run_baseline(RunConfig const &config, Policy policy);

}  // namespace tanglefl
