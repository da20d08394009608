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

#include "publisher.hpp"
#include "tanglefl/simulation.hpp"
#include "tanglefl/training.hpp"

#include <algorithm>
#include <numeric>

namespace tanglefl {
namespace detail {

RunResult run_async(RunConfig const &config, Policy policy);

namespace {

TrainOptions options_of(RunConfig const &config)
{
  TrainOptions o;
  o.epochs     = config.local_epochs;
  o.lr         = config.lr;
  o.batch_size = config.batch_size;
  return o;
}

double mean_validation(ModelParams const &model, std::vector<ClientState> const &clients)
{
  double sum = 0.0;
  for (auto const &c : clients)
  {
    sum += evaluate_accuracy(model, c.data.validation);
  }
  return sum / static_cast<double>(clients.size());
}

// `log` is the one the publisher writes to, so it is only moved out at the end
RunResult finish(RunConfig const &config, BootstrapState state, EventLog &log, Publisher &publisher,
                 double now)
{
  if (!publisher.terminated())
  {
    publisher.terminate(now, "max_iters");
  }
  log.end_time = now;

  RunResult result;
  result.metrics = collect_metrics(log, config.target_accuracy);
  result.log     = std::move(log);
  result.ledger  = std::move(state.ledger);
  result.store   = std::move(state.store);
  result.clients = std::move(state.clients);
  return result;
}

/// Synchronous rounds: everyone starts from the global model, the round lasts
/// as long as the slowest client, and the server takes the sample-weighted mean.
RunResult run_sync_fedavg(RunConfig const &config)
{
  BootstrapState state = bootstrap(config);
  EventLog       log;
  log.policy = to_string(Policy::sync_fedavg);
  Publisher publisher(config, log);

  TrainOptions const options = options_of(config);
  ModelParams        global  = state.initial_model;
  double             now     = 0.0;

  double total_samples = 0.0;
  for (auto const &c : state.clients)
  {
    total_samples += static_cast<double>(c.data.train.size());
  }

  for (std::size_t round = 1; round <= config.max_global_iters && !publisher.terminated(); ++round)
  {
    std::vector<ModelParams> locals;
    std::vector<double>      finish_at;
    for (auto &c : state.clients)
    {
      locals.push_back(local_train(global, c.data.train, options, train_seed(config.seed, c.id, round)));
      finish_at.push_back(now + config.base_epoch_time * c.speed_factor *
                                    static_cast<double>(config.local_epochs));
    }

    std::vector<std::size_t> order(state.clients.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return finish_at[a] < finish_at[b]; });
    for (auto k : order)
    {
      auto &c               = state.clients[k];
      c.epoch               = round;
      c.validation_accuracy = evaluate_accuracy(locals[k], c.data.validation);
      c.test_accuracy       = evaluate_accuracy(locals[k], state.global_test);

      LogEntry e;
      e.kind                = LogKind::upload;
      e.time                = finish_at[k];
      e.client              = c.id;
      e.epoch               = round;
      e.selection_start     = now;
      e.validation_accuracy = c.validation_accuracy;
      e.test_accuracy       = c.test_accuracy;
      log.entries.push_back(e);
    }

    ModelParams next(global.shape());
    auto        acc = next.values();
    for (std::size_t k = 0; k < locals.size(); ++k)
    {
      double const weight = static_cast<double>(state.clients[k].data.train.size()) / total_samples;
      auto const   v      = locals[k].values();
      for (std::size_t i = 0; i < acc.size(); ++i)
      {
        acc[i] += weight * v[i];
      }
    }
    global = std::move(next);
    now    = *std::max_element(finish_at.begin(), finish_at.end());
    for (auto &c : state.clients)
    {
      c.model = global;
    }

    publisher.check(now, mean_validation(global, state.clients),
                    evaluate_accuracy(global, state.global_test));
  }
  return finish(config, std::move(state), log, publisher, now);
}

/// One model on the pooled training data of every client. A round is
/// `local_epochs` passes, charged in proportion to the pooled size.
RunResult run_centralized(RunConfig const &config)
{
  BootstrapState state = bootstrap(config);
  EventLog       log;
  log.policy = to_string(Policy::centralized);
  Publisher publisher(config, log);

  std::vector<Dataset> trains;
  for (auto const &c : state.clients)
  {
    trains.push_back(c.data.train);
  }
  Dataset const pooled = concat(trains);
  // pooled data is K times an average client's share
  double const scale = static_cast<double>(state.clients.size());

  TrainOptions const options = options_of(config);
  ModelParams        model   = state.initial_model;
  double             now     = 0.0;

  for (std::size_t round = 1; round <= config.max_global_iters && !publisher.terminated(); ++round)
  {
    double const start = now;
    model = local_train(model, pooled, options, train_seed(config.seed, 0, round));
    now += config.base_epoch_time * static_cast<double>(config.local_epochs) * scale;

    double const val  = mean_validation(model, state.clients);
    double const test = evaluate_accuracy(model, state.global_test);

    LogEntry e;
    e.kind                = LogKind::upload;
    e.time                = now;
    e.client              = 0;
    e.epoch               = round;
    e.selection_start     = start;
    e.validation_accuracy = val;
    e.test_accuracy       = test;
    log.entries.push_back(e);

    for (auto &c : state.clients)
    {
      c.epoch = round;
      c.model = model;
    }
    publisher.check(now, val, test);
  }
  return finish(config, std::move(state), log, publisher, now);
}

}  // namespace
}  // namespace detail

RunResult run_baseline(RunConfig const &config, Policy policy)
{
  switch (policy)
  {
  case Policy::dag_afl:
  case Policy::independent:
  case Policy::pure_async:
    return detail::run_async(config, policy);
  case Policy::sync_fedavg:
    return detail::run_sync_fedavg(config);
  case Policy::centralized:
    return detail::run_centralized(config);
  }
  throw std::invalid_argument("unknown policy");
}

}  // namespace tanglefl
