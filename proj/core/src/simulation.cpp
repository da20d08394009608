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

#include "tanglefl/simulation.hpp"

#include "publisher.hpp"
#include "tanglefl/partition.hpp"
#include "tanglefl/random.hpp"
#include "tanglefl/selection.hpp"
#include "tanglefl/training.hpp"

#include <cmath>
#include <ostream>
#include <queue>
#include <random>
#include <stdexcept>

namespace tanglefl {

std::string to_string(Policy policy)
{
  switch (policy)
  {
  case Policy::dag_afl:
    return "dag-afl";
  case Policy::centralized:
    return "centralized";
  case Policy::independent:
    return "independent";
  case Policy::sync_fedavg:
    return "sync-fedavg";
  case Policy::pure_async:
    return "pure-async";
  }
  return "?";
}

Policy parse_policy(std::string const &name)
{
  for (auto p : {Policy::dag_afl, Policy::centralized, Policy::independent, Policy::sync_fedavg,
                 Policy::pure_async})
  {
    if (to_string(p) == name)
    {
      return p;
    }
  }
  throw std::invalid_argument("unknown policy '" + name + "'");
}

void ModelStore::put(NodeId id, ModelParams model)
{
  if (!models_.emplace(id, std::move(model)).second)
  {
    throw std::logic_error("model store already holds node " + std::to_string(id.value));
  }
}

ModelParams const &ModelStore::get(NodeId id) const
{
  auto it = models_.find(id);
  if (it == models_.end())
  {
    throw std::out_of_range("model store has no model for node " + std::to_string(id.value));
  }
  return it->second;
}

std::uint64_t train_seed(std::uint64_t run_seed, std::uint64_t client, std::uint64_t epoch)
{
  return derive_seed(run_seed, {kStreamTrain, client, epoch});
}

std::vector<double> resolve_speed_factors(RunConfig const &config)
{
  if (!config.speed_factors.empty())
  {
    return config.speed_factors;
  }
  Rng                                    rng(derive_seed(config.seed, {kStreamSpeed}));
  std::uniform_real_distribution<double> log_speed(0.0, std::log(5.0));
  std::vector<double>                    out(config.clients);
  for (auto &s : out)
  {
    s = std::exp(log_speed(rng));
  }
  return out;
}

BootstrapState bootstrap(RunConfig const &config)
{
  config.validate();

  Dataset const data = make_task(config.task, config.samples, derive_seed(config.seed, {kStreamData}));
  ModelShape const shape{data.feature_count, config.hidden, data.class_count};

  PartitionSpec spec;
  spec.mode         = config.partition_mode;
  spec.beta         = config.beta;
  spec.client_count = config.clients;
  spec.seed         = derive_seed(config.seed, {kStreamPartition});
  auto const parts  = partition(data, spec);

  auto const speeds = resolve_speed_factors(config);

  BootstrapState state;
  state.initial_model = init_model(shape, derive_seed(config.seed, {kStreamInit}));

  TipMetadata genesis;
  genesis.client_id          = kPublisherId;
  genesis.model_accuracy     = 0.0;
  genesis.current_epoch      = 0;
  genesis.validation_node_id = kPublisherId;
  genesis.timestamp          = 0.0;
  state.ledger               = Ledger(genesis);
  state.store.put(kGenesis, state.initial_model);

  std::vector<Dataset> tests;
  for (std::size_t k = 0; k < config.clients; ++k)
  {
    ClientState client;
    client.id           = k;
    client.speed_factor = speeds[k];
    client.data         = split_train_val_test(parts[k], derive_seed(config.seed, {kStreamSplit, k}));
    client.model        = state.initial_model;
    client.latest_node  = kGenesis;
    tests.push_back(client.data.test);
    state.clients.push_back(std::move(client));
  }
  state.global_test = concat(tests);

  for (auto &client : state.clients)
  {
    client.validation_accuracy = evaluate_accuracy(client.model, client.data.validation);
    client.test_accuracy       = evaluate_accuracy(client.model, state.global_test);
    client.path                = extract_verification_path(state.ledger, kGenesis);
    client.trusted_digest      = state.ledger.node(kGenesis).digest;
  }
  return state;
}

void write_trace_csv(std::ostream &out, std::vector<TraceRow> const &rows)
{
  out << "time,selector,tip,reachable,tipc,freshness,similarity,accuracy,chosen\n";
  for (auto const &r : rows)
  {
    out << format_double(r.time) << ',' << r.selector << ',' << r.tip.value << ','
        << (r.reachable ? 1 : 0) << ',' << format_double(r.tipc) << ','
        << format_double(r.freshness) << ','
        << (r.similarity ? format_double(*r.similarity) : std::string()) << ','
        << (r.accuracy ? format_double(*r.accuracy) : std::string()) << ',' << (r.chosen ? 1 : 0)
        << '\n';
  }
}

namespace detail {

/**
 * Discrete-event loop for the asynchronous policies (dag-afl, independent,
 * pure-async). Events run in (time, sequence) order; the loop is the only
 * mutator of ledger, store and registry.
 */
class AsyncEngine
{
public:
  AsyncEngine(RunConfig const &config, Policy policy)
    : config_{config}
    , policy_{policy}
    , state_{bootstrap(config)}
    , publisher_{config, log_, config.clients}
  {
    train_options_.epochs     = config.local_epochs;
    train_options_.lr         = config.lr;
    train_options_.batch_size = config.batch_size;
    pending_.resize(state_.clients.size());
    log_.policy  = to_string(policy);
    log_.genesis = state_.ledger.node(kGenesis);
    if (policy_ == Policy::pure_async)
    {
      global_ = state_.initial_model;
    }
  }

  RunResult run()
  {
    for (std::size_t c = 0; c < state_.clients.size(); ++c)
    {
      schedule(0.0, Kind::wake, c);
    }
    while (!queue_.empty())
    {
      Event const ev = queue_.top();
      queue_.pop();
      now_ = ev.time;
      if (ev.kind == Kind::wake)
      {
        wake(ev.client);
      }
      else
      {
        complete(ev.client);
      }
    }
    if (!publisher_.terminated())
    {
      publisher_.terminate(now_, "max_iters");
    }
    log_.end_time = now_;

    RunResult result;
    result.metrics  = collect_metrics(log_, config_.target_accuracy);
    result.log      = std::move(log_);
    result.ledger   = std::move(state_.ledger);
    result.store    = std::move(state_.store);
    result.registry = std::move(registry_);
    result.clients  = std::move(state_.clients);
    result.trace    = std::move(trace_);
    return result;
  }

private:
  enum class Kind
  {
    wake,
    training_complete
  };

  struct Event
  {
    double        time;
    std::uint64_t sequence;
    Kind          kind;
    std::size_t   client;

    bool operator>(Event const &o) const
    {
      return time != o.time ? time > o.time : sequence > o.sequence;
    }
  };

  struct Pending
  {
    double              selection_start{0.0};
    double              eval_cost{0.0};
    ModelParams         start_model;
    std::vector<NodeId> parents;
  };

  void schedule(double time, Kind kind, std::size_t client)
  {
    queue_.push(Event{time, next_sequence_++, kind, client});
  }

  void wake(std::size_t c)
  {
    ClientState &client = state_.clients[c];
    if (publisher_.terminated() || client.epoch >= config_.max_global_iters)
    {
      return;
    }
    Pending &p        = pending_[c];
    p.selection_start = now_;
    p.eval_cost       = 0.0;
    p.parents.clear();

    switch (policy_)
    {
    case Policy::dag_afl:
      select_and_aggregate(c, p);
      break;
    case Policy::independent:
      p.start_model = client.model;
      break;
    case Policy::pure_async:
      p.start_model = global_;
      break;
    default:
      throw std::logic_error("async engine cannot run policy " + to_string(policy_));
    }

    double const training =
        config_.base_epoch_time * client.speed_factor * static_cast<double>(config_.local_epochs);
    schedule(now_ + p.eval_cost + training, Kind::training_complete, c);
  }

  void select_and_aggregate(std::size_t c, Pending &p)
  {
    ClientState const &client = state_.clients[c];
    Ledger const      &ledger = state_.ledger;

    LogEntry entry;
    entry.kind              = LogKind::selection;
    entry.time              = now_;
    entry.client            = client.id;
    entry.epoch             = client.epoch;
    entry.ledger_size       = ledger.size();
    entry.reachable_quota   = config_.selection.reachable_quota();
    entry.unreachable_quota = config_.selection.unreachable_quota();

    std::vector<NodeId> chosen;
    if (config_.tip_selection == TipSelectionMode::random)
    {
      chosen = select_random_tips(
          ledger, config_.selection.tips,
          derive_seed(config_.seed, {kStreamSelection, client.id, client.epoch + 1}));
      auto const parts       = partition_tips(ledger, client.latest_node);
      entry.reachable_pool   = parts.reachable.size();
      entry.unreachable_pool = parts.unreachable.size();
      for (auto id : chosen)
      {
        entry.reachable_picks += std::binary_search(parts.reachable.begin(), parts.reachable.end(), id);
      }
    }
    else
    {
      Selector selector;
      selector.client         = client.id;
      selector.anchor         = client.latest_node;
      selector.epoch          = client.epoch;
      selector.now            = now_;
      selector.registry_round = ledger.size() - 1;

      Dataset const &validation = client.data.validation;
      auto evaluator = [&](NodeId tip) { return evaluate_accuracy(state_.store.get(tip), validation); };
      auto result    = select_tips(ledger, selector, config_.selection, registry_, evaluator);

      p.eval_cost = static_cast<double>(result.evaluations) * static_cast<double>(validation.size()) *
                        config_.eval_cost_per_sample +
                    static_cast<double>(result.registry_queries) * config_.registry_query_cost;
      entry.reachable_pool   = result.reachable_pool;
      entry.unreachable_pool = result.unreachable_pool;
      entry.reachable_picks  = result.reachable_picks;
      entry.evaluations      = result.evaluations;
      chosen                 = std::move(result.chosen);

      if (config_.trace)
      {
        for (auto const &s : result.candidates)
        {
          trace_.push_back(TraceRow{now_, client.id, s.tip, s.reachable, s.tipc, s.freshness,
                                    s.similarity_to_selector, s.measured_accuracy, s.chosen});
        }
      }
    }

    entry.chosen = chosen;
    log_.entries.push_back(entry);

    std::vector<ModelParams const *> models;
    for (auto id : chosen)
    {
      models.push_back(&state_.store.get(id));
    }
    p.start_model = aggregate(models);
    p.parents     = {chosen.front(), chosen.size() > 1 ? chosen[1] : chosen.front()};
  }

  void complete(std::size_t c)
  {
    ClientState &client = state_.clients[c];
    Pending     &p      = pending_[c];

    ModelParams trained = local_train(p.start_model, client.data.train, train_options_,
                                      train_seed(config_.seed, client.id, client.epoch + 1));
    ++client.epoch;
    client.model               = std::move(trained);
    client.validation_accuracy = evaluate_accuracy(client.model, client.data.validation);
    client.test_accuracy       = evaluate_accuracy(client.model, state_.global_test);

    LogEntry upload;
    upload.kind                = LogKind::upload;
    upload.time                = now_;
    upload.client              = client.id;
    upload.epoch               = client.epoch;
    upload.selection_start     = p.selection_start;
    upload.eval_cost           = p.eval_cost;
    upload.validation_accuracy = client.validation_accuracy;
    upload.test_accuracy       = client.test_accuracy;

    double mean_val  = 0.0;
    double mean_test = 0.0;
    if (policy_ == Policy::dag_afl)
    {
      upload.node = append_upload(client, p);
    }
    if (policy_ == Policy::pure_async)
    {
      mix_into_global(client.model);
      for (auto const &other : state_.clients)
      {
        mean_val += evaluate_accuracy(global_, other.data.validation);
      }
      mean_val /= static_cast<double>(state_.clients.size());
      mean_test = evaluate_accuracy(global_, state_.global_test);
    }
    else
    {
      for (auto const &other : state_.clients)
      {
        mean_val += other.validation_accuracy;
        mean_test += other.test_accuracy;
      }
      mean_val /= static_cast<double>(state_.clients.size());
      mean_test /= static_cast<double>(state_.clients.size());
    }
    log_.entries.push_back(std::move(upload));

    publisher_.check(now_, mean_val, mean_test);
    if (!publisher_.terminated())
    {
      schedule(now_, Kind::wake, c);
    }
  }

  DagNode append_upload(ClientState &client, Pending const &p)
  {
    client.signature = dataset_signature(client.model, client.data.train, config_.signature_groups);

    TipMetadata md;
    md.client_id          = client.id;
    md.signature          = client.signature;
    md.model_accuracy     = client.validation_accuracy;
    md.current_epoch      = client.epoch;
    md.validation_node_id = client.id;  // self-validation
    md.timestamp          = now_;

    NodeId const id = state_.ledger.append(p.parents[0], p.parents[1], std::move(md));
    state_.store.put(id, client.model);

    // the registry round is the id of the upload that produced the scores
    registry_.record(id.value, client.id, client.id, 1.0);
    for (auto const &other : state_.clients)
    {
      if (other.id != client.id && !other.signature.entries.empty())
      {
        registry_.record(id.value, client.id, other.id,
                         cosine_similarity(client.signature, other.signature));
      }
    }

    client.latest_node    = id;
    client.path           = extract_verification_path(state_.ledger, id);
    client.trusted_digest = state_.ledger.node(id).digest;
    return state_.ledger.node(id);
  }

  void mix_into_global(ModelParams const &local)
  {
    constexpr double kMixing = 0.5;
    auto             g       = global_.values();
    auto const       l       = local.values();
    for (std::size_t i = 0; i < g.size(); ++i)
    {
      g[i] = (1.0 - kMixing) * g[i] + kMixing * l[i];
    }
  }

  RunConfig const   &config_;
  Policy             policy_;
  BootstrapState     state_;
  EventLog           log_;
  Publisher          publisher_;
  SimilarityRegistry registry_;
  TrainOptions       train_options_;
  ModelParams        global_;
  std::vector<Pending>  pending_;
  std::vector<TraceRow> trace_;

  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  std::uint64_t next_sequence_{0};
  double        now_{0.0};
};

RunResult run_async(RunConfig const &config, Policy policy)
{
  return AsyncEngine(config, policy).run();
}

}  // namespace detail

RunResult run(RunConfig const &config)
{
  return detail::run_async(config, Policy::dag_afl);
}

}  // namespace tanglefl
