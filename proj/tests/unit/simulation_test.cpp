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

#include "oracles.hpp"

#include "tanglefl/ledger_io.hpp"
#include "tanglefl/selection.hpp"
#include "tanglefl/simulation.hpp"
#include "tanglefl/training.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

namespace tanglefl {
namespace {

RunConfig small_config()
{
  RunConfig c;
  c.samples          = 600;
  c.clients          = 4;
  c.hidden           = 16;
  c.signature_groups = 4;
  c.max_global_iters = 8;
  c.local_epochs     = 1;
  c.patience         = 1000;
  c.seed             = 7;
  return c;
}

std::string ledger_text(Ledger const &ledger)
{
  std::ostringstream out;
  write_ledger_jsonl(out, ledger);
  return out.str();
}

TEST(Bootstrap, InitialState)
{
  RunConfig c = small_config();
  c.clients   = 10;
  auto const state = bootstrap(c);
  ASSERT_EQ(state.clients.size(), 10u);
  EXPECT_EQ(state.ledger.size(), 1u);
  EXPECT_EQ(state.ledger.tips(), std::vector<NodeId>{kGenesis});
  EXPECT_EQ(state.store.get(kGenesis), state.initial_model);
  EXPECT_EQ(state.ledger.node(kGenesis).metadata.client_id, kPublisherId);

  std::size_t total = 0;
  for (auto const &client : state.clients)
  {
    EXPECT_EQ(client.epoch, 0u);
    EXPECT_EQ(client.latest_node, kGenesis);
    EXPECT_GE(client.speed_factor, 1.0);
    EXPECT_LE(client.speed_factor, 5.0);
    total += client.data.train.size() + client.data.validation.size() + client.data.test.size();
  }
  EXPECT_EQ(total, c.samples);

  auto const again = bootstrap(c);
  EXPECT_EQ(again.initial_model, state.initial_model);
  for (std::size_t k = 0; k < 10; ++k)
  {
    EXPECT_EQ(again.clients[k].data.train.features, state.clients[k].data.train.features);
    EXPECT_EQ(again.clients[k].speed_factor, state.clients[k].speed_factor);
  }

  c.clients = 0;
  EXPECT_THROW(bootstrap(c), ConfigError);
}

TEST(Run, Deterministic)
{
  RunConfig const c = small_config();
  auto const      a = run(c);
  auto const      b = run(c);
  EXPECT_EQ(ledger_text(a.ledger), ledger_text(b.ledger));

  std::ostringstream la;
  std::ostringstream lb;
  a.log.write_jsonl(la);
  b.log.write_jsonl(lb);
  EXPECT_EQ(la.str(), lb.str());

  for (auto tip : a.ledger.tips())
  {
    EXPECT_EQ(a.ledger.node(tip).digest, b.ledger.node(tip).digest);
  }

  RunConfig other = c;
  other.seed      = 8;
  EXPECT_NE(ledger_text(run(other).ledger), ledger_text(a.ledger));
}

TEST(Run, StopsAtIterationBound)
{
  RunConfig c        = small_config();
  c.speed_factors    = {1.0, 1.0, 1.0, 1.0};
  c.max_global_iters = 5;
  auto const r       = run(c);
  EXPECT_EQ(r.metrics.terminated_by, "max_iters");
  for (auto const &client : r.clients)
  {
    EXPECT_EQ(client.epoch, 5u);
  }
  EXPECT_EQ(r.ledger.size(), 1u + 4u * 5u);
}

TEST(Run, PatienceAndTargetTerminate)
{
  RunConfig c        = small_config();
  c.patience         = 1;
  c.max_global_iters = 50;
  auto const r       = run(c);
  EXPECT_EQ(r.metrics.terminated_by, "patience");

  c.patience        = 1000;
  c.target_accuracy = 0.3;
  auto const t      = run(c);
  EXPECT_EQ(t.metrics.terminated_by, "target");
  ASSERT_TRUE(t.metrics.time_to_target.has_value());
  EXPECT_GE(t.metrics.final_mean_accuracy, 0.3);
}

TEST(Run, SingleClientMatchesStandaloneTraining)
{
  RunConfig c        = small_config();
  c.clients          = 1;
  c.samples          = 200;
  c.local_epochs     = 2;
  c.max_global_iters = 6;

  auto const r     = run(c);
  auto const state = bootstrap(c);
  auto const &data = state.clients[0].data;

  TrainOptions opts;
  opts.epochs     = c.local_epochs;
  opts.lr         = c.lr;
  opts.batch_size = c.batch_size;

  ModelParams         model = state.initial_model;
  std::vector<double> expected;
  for (std::uint64_t epoch = 1; epoch <= c.max_global_iters; ++epoch)
  {
    model = local_train(model, data.train, opts, train_seed(c.seed, 0, epoch));
    expected.push_back(evaluate_accuracy(model, state.global_test));
  }

  std::vector<double> got;
  for (auto const &e : r.log.entries)
  {
    if (e.kind == LogKind::upload)
    {
      got.push_back(e.test_accuracy);
    }
  }
  EXPECT_EQ(got, expected);
  EXPECT_EQ(r.clients[0].model, model);
}

TEST(Run, LedgerStoreAndPaths)
{
  RunConfig c = small_config();
  c.clients   = 5;
  auto const r = run(c);

  EXPECT_EQ(r.store.size(), r.ledger.size());
  for (auto const &n : r.ledger.nodes())
  {
    EXPECT_TRUE(r.store.contains(n.id));
    EXPECT_TRUE(r.store.get(n.id).all_finite());
  }
  auto const tips = r.ledger.tips();
  EXPECT_EQ(std::set<NodeId>(tips.begin(), tips.end()), testing::brute_force_tips(r.ledger));

  for (auto const &client : r.clients)
  {
    ASSERT_FALSE(client.path.empty());
    EXPECT_EQ(client.path.front().id, client.latest_node);
    EXPECT_TRUE(verify_path(client.path, client.trusted_digest).accepted);
  }
}

TEST(Run, CausalityAndEpochBookkeeping)
{
  RunConfig c        = small_config();
  c.clients          = 6;
  c.max_global_iters = 6;
  auto const r       = run(c);

  // replay the log: tips at every selection, parents at every upload
  std::set<NodeId>                           tips{kGenesis};
  std::map<std::uint64_t, std::set<NodeId>> tips_at_selection;
  std::map<std::uint64_t, std::uint64_t>    last_epoch;
  std::size_t                               uploads = 0;
  for (auto const &e : r.log.entries)
  {
    if (e.kind == LogKind::selection)
    {
      tips_at_selection[e.client] = tips;
      for (auto id : e.chosen)
      {
        EXPECT_TRUE(tips.contains(id));
      }
    }
    else if (e.kind == LogKind::upload)
    {
      ASSERT_TRUE(e.node.has_value());
      ++uploads;
      for (auto p : e.node->parents)
      {
        EXPECT_TRUE(tips_at_selection.at(e.client).contains(p)) << "node " << e.node->id.value;
        tips.erase(p);
      }
      tips.insert(e.node->id);

      EXPECT_EQ(e.node->metadata.current_epoch, last_epoch[e.client] + 1);
      last_epoch[e.client] = e.node->metadata.current_epoch;
      EXPECT_EQ(e.node->metadata.client_id, e.client);
      EXPECT_EQ(r.ledger.node(e.node->id).digest, e.node->digest);
    }
  }
  EXPECT_EQ(uploads + 1, r.ledger.size());
  auto const final_tips = r.ledger.tips();
  EXPECT_EQ(tips, std::set<NodeId>(final_tips.begin(), final_tips.end()));
}

TEST(Run, SelectionQuotasHoldInLog)
{
  RunConfig c = small_config();
  c.clients   = 6;
  auto const r = run(c);
  std::size_t checked = 0;
  for (auto const &e : r.log.entries)
  {
    if (e.kind != LogKind::selection)
    {
      continue;
    }
    EXPECT_EQ(e.reachable_quota, c.selection.reachable_quota());
    if (e.reachable_pool >= e.reachable_quota && e.unreachable_pool >= e.unreachable_quota)
    {
      EXPECT_EQ(e.reachable_picks, e.reachable_quota);
      ++checked;
    }
  }
  EXPECT_GT(checked, 0u);
}

TEST(Run, MetricsReplayFromLog)
{
  RunConfig c       = small_config();
  c.target_accuracy = 0.5;
  auto const r      = run(c);

  std::stringstream text;
  r.log.write_jsonl(text);
  auto const replayed = EventLog::read_jsonl(text);
  auto const m        = collect_metrics(replayed, c.target_accuracy);
  EXPECT_EQ(m.uploads, r.metrics.uploads);
  EXPECT_EQ(m.time_to_target, r.metrics.time_to_target);
  EXPECT_EQ(m.final_mean_accuracy, r.metrics.final_mean_accuracy);
  EXPECT_EQ(m.mean_latency, r.metrics.mean_latency);
  EXPECT_EQ(m.makespan, r.metrics.makespan);

  double      latency = 0.0;
  std::size_t n       = 0;
  for (auto const &e : r.log.entries)
  {
    if (e.kind == LogKind::upload)
    {
      latency += e.time - e.selection_start;
      ++n;
    }
  }
  EXPECT_NEAR(r.metrics.mean_latency, latency / static_cast<double>(n), 1e-12);
  EXPECT_GT(r.metrics.mean_latency, r.metrics.mean_latency_exclusive);
}

TEST(Run, TraceAndRegistry)
{
  RunConfig c = small_config();
  c.trace     = true;
  auto const r = run(c);
  EXPECT_FALSE(r.trace.empty());
  EXPECT_GT(r.registry.size(), 0u);
  for (auto const &row : r.trace)
  {
    EXPECT_LE(row.freshness, row.tipc);
    if (row.reachable)
    {
      EXPECT_TRUE(row.accuracy.has_value());
    }
  }
  std::ostringstream csv;
  write_trace_csv(csv, r.trace);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')),
            "time,selector,tip,reachable,tipc,freshness,similarity,accuracy,chosen");
}

TEST(Run, RandomTipSelection)
{
  RunConfig c     = small_config();
  c.tip_selection = TipSelectionMode::random;
  auto const r    = run(c);
  EXPECT_EQ(r.metrics.uploads + 1, r.ledger.size());
  EXPECT_EQ(r.metrics.total_eval_cost, 0.0);
}

TEST(Baselines, SyncFedAvgMatchesReferenceLoop)
{
  RunConfig c        = small_config();
  c.clients          = 3;
  c.local_epochs     = 1;
  c.max_global_iters = 4;
  c.speed_factors    = {1.0, 1.0, 1.0};

  auto const r     = run_baseline(c, Policy::sync_fedavg);
  auto const state = bootstrap(c);

  TrainOptions opts;
  opts.epochs     = 1;
  opts.lr         = c.lr;
  opts.batch_size = c.batch_size;

  double n_total = 0.0;
  for (auto const &client : state.clients)
  {
    n_total += static_cast<double>(client.data.train.size());
  }
  std::vector<double> global(state.initial_model.values().begin(), state.initial_model.values().end());
  for (std::uint64_t round = 1; round <= c.max_global_iters; ++round)
  {
    ModelParams const   start(state.initial_model.shape(), global);
    std::vector<double> next(global.size(), 0.0);
    for (auto const &client : state.clients)
    {
      auto const local = local_train(start, client.data.train, opts, train_seed(c.seed, client.id, round));
      double const w   = static_cast<double>(client.data.train.size()) / n_total;
      for (std::size_t i = 0; i < next.size(); ++i)
      {
        next[i] += w * local.values()[i];
      }
    }
    global = next;
  }

  EXPECT_EQ(r.metrics.terminated_by, "max_iters");
  for (auto const &client : r.clients)
  {
    for (std::size_t i = 0; i < global.size(); ++i)
    {
      ASSERT_NEAR(client.model.values()[i], global[i], 1e-9);
    }
  }
  EXPECT_DOUBLE_EQ(r.metrics.makespan, 4.0);
}

TEST(Baselines, StragglerBoundsSynchronousRounds)
{
  RunConfig c        = small_config();
  c.speed_factors    = {1.0, 1.0, 1.0, 5.0};
  c.max_global_iters = 4;

  auto const sync = run_baseline(c, Policy::sync_fedavg);

  // no per-client cap, so fast clients are free to run ahead
  RunConfig uncapped        = c;
  uncapped.max_global_iters = 20;
  auto const async          = run_baseline(uncapped, Policy::pure_async);
  EXPECT_DOUBLE_EQ(sync.metrics.makespan, 4 * 5.0);

  // time at which pure-async has done as many uploads as the synchronous run
  std::size_t uploads = 0;
  double      when    = 0.0;
  for (auto const &e : async.log.entries)
  {
    if (e.kind == LogKind::upload && ++uploads == sync.metrics.uploads)
    {
      when = e.time;
      break;
    }
  }
  EXPECT_EQ(uploads, sync.metrics.uploads);
  EXPECT_LT(when, sync.metrics.makespan);
}

TEST(Baselines, AllPoliciesRun)
{
  RunConfig const c = small_config();
  for (auto p : {Policy::dag_afl, Policy::centralized, Policy::independent, Policy::sync_fedavg,
                 Policy::pure_async})
  {
    auto const r = run_baseline(c, p);
    EXPECT_EQ(r.log.policy, to_string(p));
    EXPECT_GT(r.metrics.uploads, 0u);
    EXPECT_GE(r.metrics.final_mean_accuracy, 0.0);
    EXPECT_LE(r.metrics.final_mean_accuracy, 1.0);
    EXPECT_EQ(parse_policy(to_string(p)), p);
  }
  EXPECT_THROW(parse_policy("fedprox"), std::invalid_argument);
}

TEST(ModelStoreTest, RejectsDuplicatesAndUnknown)
{
  ModelStore store;
  store.put(NodeId{1}, ModelParams({2, 2, 2}));
  EXPECT_THROW(store.put(NodeId{1}, ModelParams({2, 2, 2})), std::logic_error);
  EXPECT_THROW(store.get(NodeId{2}), std::out_of_range);
}

TEST(SpeedFactors, ResolvedFromSeed)
{
  RunConfig c     = small_config();
  auto const auto_speeds = resolve_speed_factors(c);
  EXPECT_EQ(auto_speeds, resolve_speed_factors(c));
  ASSERT_EQ(auto_speeds.size(), c.clients);
  c.speed_factors = {1, 2, 3, 4};
  EXPECT_EQ(resolve_speed_factors(c), c.speed_factors);
}

}  // namespace
}  // namespace tanglefl
